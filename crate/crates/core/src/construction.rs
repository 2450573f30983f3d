//! Frozen-set selection and the text format for code definitions.
//!
//! File format: line 1 is `n k` (or `n k r` when an outer check of `r` bits
//! is attached), then one frozen index per line in increasing order, with an
//! optional `# value=1` suffix for positions frozen to one. Blank lines are
//! ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::channel::{stream_rng, ChannelModel};
use crate::encoder::polar_transform;
use crate::error::{Error, Result};
use crate::exec::{fold_range, Execution};
use crate::sc::ScDecoder;
use crate::types::{BitVec, CodeSpec};

fn check_dims(n: usize, k: usize) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::arg(format!("n = {n} is not a power of two >= 2")));
    }
    if k == 0 || k > n {
        return Err(Error::arg(format!("k = {k} outside (0, {n}]")));
    }
    Ok(())
}

/// Freezes the `n - k` positions with the largest score; equal scores freeze
/// the lower index first.
fn freeze_worst<S: PartialOrd + Copy>(scores: &[S], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut frozen = order[..scores.len() - k].to_vec();
    frozen.sort_unstable();
    frozen
}

/// Bhattacharyya parameters of every bit channel under the erasure-channel
/// recursion `z(2i) = 2z - z^2`, `z(2i+1) = z^2`, starting from `z0`.
pub fn bhattacharyya_parameters(m: u32, z0: f64) -> Vec<f64> {
    let mut z = vec![z0];
    for _ in 0..m {
        z = z
            .iter()
            .flat_map(|&v| [2.0 * v - v * v, v * v])
            .collect();
    }
    z
}

pub fn bhattacharyya_construct(n: usize, k: usize, design_param: f64) -> Result<CodeSpec> {
    check_dims(n, k)?;
    if !(0.0..=1.0).contains(&design_param) {
        return Err(Error::arg(format!(
            "design parameter {design_param} outside [0, 1]"
        )));
    }
    let z = bhattacharyya_parameters(n.trailing_zeros(), design_param);
    CodeSpec::with_zero_frozen(n, &freeze_worst(&z, k), 0)
}

/// Genie-aided error counts per position, in half-error units: a wrong
/// decision counts 2 and a tie counts 1.
pub fn genie_error_counts(
    n: usize,
    model: &ChannelModel,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<Vec<u64>> {
    check_dims(n, n)?;
    let spec = CodeSpec::with_zero_frozen(n, &[], 0)?;
    let zeros = BitVec::zeros(n);
    debug_assert_eq!(polar_transform(zeros.as_slice())?, zeros);
    let m = n.trailing_zeros();
    fold_range(
        exec,
        0..trials,
        || Ok((vec![0u64; n], ScDecoder::<f64>::new(m).with_normalization(true))),
        |acc: Result<(Vec<u64>, ScDecoder<f64>)>, t| {
            let (mut counts, mut decoder) = acc?;
            let mut rng = stream_rng(seed, t);
            let y = model.transmit(&zeros, &mut rng);
            let probs = model.prob_pairs(&y)?;
            decoder.decode_with(&spec, &probs, |phi, pair| {
                counts[phi] += if pair.p0 > pair.p1 {
                    0
                } else if pair.p0 == pair.p1 {
                    1
                } else {
                    2
                };
                0
            })?;
            Ok((counts, decoder))
        },
        |a, b| {
            let (mut ca, da) = a?;
            let (cb, _) = b?;
            ca.iter_mut().zip(cb).for_each(|(x, y)| *x += y);
            Ok((ca, da))
        },
    )
    .map(|(counts, _)| counts)
}

pub fn monte_carlo_construct(
    n: usize,
    k: usize,
    model: &ChannelModel,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<CodeSpec> {
    check_dims(n, k)?;
    if trials == 0 {
        return Err(Error::arg("monte-carlo construction needs at least one trial"));
    }
    let counts = genie_error_counts(n, model, trials, seed, exec)?;
    CodeSpec::with_zero_frozen(n, &freeze_worst(&counts, k), 0)
}

pub fn spec_to_string(spec: &CodeSpec) -> String {
    let mut out = if spec.crc_width() > 0 {
        format!("{} {} {}\n", spec.n(), spec.k(), spec.crc_width())
    } else {
        format!("{} {}\n", spec.n(), spec.k())
    };
    for (pos, value) in spec.frozen_entries() {
        if value == 0 {
            let _ = writeln!(out, "{pos}");
        } else {
            let _ = writeln!(out, "{pos} # value={value}");
        }
    }
    out
}

pub fn parse_spec(text: &str) -> Result<CodeSpec> {
    let err = |line: usize, message: String| Error::Parse { line, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| err(1, "empty code file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if !(2..=3).contains(&fields.len()) {
        return Err(err(hline, format!("expected `n k` header, found {header:?}")));
    }
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| err(hline, format!("invalid number {s:?}")))
    };
    let n = num(fields[0])?;
    let k = num(fields[1])?;
    let r = fields.get(2).map(|s| num(s)).transpose()?.unwrap_or(0);
    if n < 2 || !n.is_power_of_two() || k > n {
        return Err(err(hline, format!("invalid dimensions n = {n}, k = {k}")));
    }

    let mut seen = vec![false; n];
    let mut frozen = Vec::with_capacity(n - k);
    for (lineno, line) in lines {
        let (index, comment) = match line.split_once('#') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (line, None),
        };
        let pos: usize = index
            .parse()
            .map_err(|_| err(lineno, format!("invalid frozen index {index:?}")))?;
        if pos >= n {
            return Err(err(lineno, format!("frozen index {pos} out of range for n = {n}")));
        }
        if std::mem::replace(&mut seen[pos], true) {
            return Err(err(lineno, format!("duplicate frozen index {pos}")));
        }
        let value = match comment {
            None => 0,
            Some(c) => match c.strip_prefix("value=").map(str::trim) {
                Some("0") => 0,
                Some("1") => 1,
                _ => return Err(err(lineno, format!("invalid frozen value annotation {c:?}"))),
            },
        };
        frozen.push((pos, value));
    }
    if frozen.len() != n - k {
        return Err(err(
            hline,
            format!("header implies {} frozen indices, file lists {}", n - k, frozen.len()),
        ));
    }
    CodeSpec::new(n, &frozen, r).map_err(|e| err(hline, e.to_string()))
}

pub fn save_spec(spec: &CodeSpec, path: &Path) -> Result<()> {
    fs::write(path, spec_to_string(spec)).map_err(|e| Error::io(path, e))
}

pub fn load_spec(path: &Path) -> Result<CodeSpec> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_spec(&text)
}
