//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

pub mod fuzz;

use polarlist::{
    build_u, polar_transform, BitVec, ChannelModel, CodeSpec, Likelihood, OuterCode, ProbPair,
};
use rand::seq::index::sample;
use rand::Rng;

/// One decoding path of the deep-copy decoder: every layer's arrays are owned.
#[derive(Clone)]
struct NaivePath<T> {
    p: Vec<Vec<[T; 2]>>,
    c: Vec<Vec<[u8; 2]>>,
}

pub struct NaiveOutcome<T> {
    pub c_hat: Vec<u8>,
    pub selected: usize,
    /// `(path index, final metric)` of every surviving path, by index.
    pub metrics: Vec<(usize, T)>,
    pub check_fallback: bool,
}

/// List decoder that deep-copies a path's full state on every clone. Path
/// indices come from the same free stack discipline as the lazy decoder
/// (indices pushed `0..L`, popped from the top), and the arithmetic is
/// evaluated in the same order, so results must agree bit for bit.
pub fn naive_scl<T: Likelihood>(
    spec: &CodeSpec,
    probs: &[ProbPair<T>],
    list_size: usize,
    check: Option<&OuterCode>,
    normalize: bool,
) -> NaiveOutcome<T> {
    let m = spec.m() as usize;
    let n = spec.n();
    assert_eq!(probs.len(), n);
    let mut free: Vec<usize> = (0..list_size).collect();
    let mut paths: Vec<Option<NaivePath<T>>> = vec![None; list_size];

    let first = free.pop().unwrap();
    let mut root = NaivePath {
        p: (0..=m).map(|l| vec![[T::zero(), T::zero()]; n >> l]).collect(),
        c: (0..=m).map(|l| vec![[0u8; 2]; n >> l]).collect(),
    };
    for (beta, pair) in probs.iter().enumerate() {
        root.p[0][beta] = [pair.p0.clone(), pair.p1.clone()];
    }
    paths[first] = Some(root);

    for phi in 0..n {
        calc(&mut paths, m, phi, normalize);
        match spec.frozen_value(phi) {
            Some(v) => {
                for path in paths.iter_mut().flatten() {
                    path.c[m][0][phi % 2] = v;
                }
            }
            None => {
                let marks = choose_forks(&paths, m, list_size);
                for ell in 0..list_size {
                    if paths[ell].is_some() && marks[ell] == [false, false] {
                        paths[ell] = None;
                        free.push(ell);
                    }
                }
                for ell in 0..list_size {
                    match marks[ell] {
                        [false, false] => {}
                        [true, true] => {
                            let path = paths[ell].as_mut().unwrap();
                            path.c[m][0][phi % 2] = 0;
                            let mut twin = path.clone();
                            twin.c[m][0][phi % 2] = 1;
                            let idx = free.pop().expect("free index for a clone");
                            paths[idx] = Some(twin);
                        }
                        [zero, _] => {
                            paths[ell].as_mut().unwrap().c[m][0][phi % 2] = u8::from(!zero);
                        }
                    }
                }
            }
        }
        if phi % 2 == 1 {
            update(&mut paths, m, phi);
        }
    }

    let mut metrics = Vec::new();
    let mut passes = Vec::new();
    for (ell, path) in paths.iter().enumerate() {
        if let Some(path) = path {
            let bit = path.c[m][0][1] as usize;
            metrics.push((ell, path.p[m][0][bit].clone()));
            let c: Vec<u8> = path.c[0].iter().map(|pair| pair[0]).collect();
            passes.push(check.map(|code| {
                let u = inverse_by_solving(&c);
                code.verify(
                    spec.extract_info(&u).as_slice(),
                    spec.extract_check(&u).as_slice(),
                )
            }));
        }
    }
    let any_pass = passes.contains(&Some(true));
    let eligible: Vec<&(usize, T)> = metrics
        .iter()
        .zip(&passes)
        .filter(|(_, pass)| !any_pass || **pass == Some(true))
        .map(|(entry, _)| entry)
        .collect();
    let mut selected = eligible[0].0;
    let mut best = T::zero();
    for (ell, metric) in eligible {
        if best < *metric {
            selected = *ell;
            best = metric.clone();
        }
    }
    let c_hat = paths[selected].as_ref().unwrap().c[0].iter().map(|p| p[0]).collect();
    NaiveOutcome {
        c_hat,
        selected,
        metrics,
        check_fallback: check.is_some() && !any_pass,
    }
}

fn calc<T: Likelihood>(paths: &mut [Option<NaivePath<T>>], lambda: usize, phi: usize, normalize: bool) {
    if lambda == 0 {
        return;
    }
    let psi = phi / 2;
    if phi % 2 == 0 {
        calc(paths, lambda - 1, psi, normalize);
    }
    let half = |a: &T, b: &T| T::half_product(a, b);
    let mut sigma = T::zero();
    for path in paths.iter_mut().flatten() {
        for beta in 0..path.p[lambda].len() {
            let a = path.p[lambda - 1][2 * beta].clone();
            let b = path.p[lambda - 1][2 * beta + 1].clone();
            let out = if phi % 2 == 0 {
                [
                    half(&a[0], &b[0]).add(&half(&a[1], &b[1])),
                    half(&a[1], &b[0]).add(&half(&a[0], &b[1])),
                ]
            } else {
                let u = path.c[lambda][beta][0] as usize;
                [half(&a[u], &b[0]), half(&a[u ^ 1], &b[1])]
            };
            for v in &out {
                if *v > sigma {
                    sigma = v.clone();
                }
            }
            path.p[lambda][beta] = out;
        }
    }
    if normalize {
        assert!(!sigma.is_zero(), "all-zero layer");
        let scale = T::scale_for(&sigma);
        for path in paths.iter_mut().flatten() {
            for cell in path.p[lambda].iter_mut() {
                *cell = [cell[0].div(&scale), cell[1].div(&scale)];
            }
        }
    }
}

fn update<T>(paths: &mut [Option<NaivePath<T>>], lambda: usize, phi: usize) {
    let psi = phi / 2;
    for path in paths.iter_mut().flatten() {
        for beta in 0..path.c[lambda].len() {
            let [even, odd] = path.c[lambda][beta];
            path.c[lambda - 1][2 * beta][psi % 2] = even ^ odd;
            path.c[lambda - 1][2 * beta + 1][psi % 2] = odd;
        }
    }
    if psi % 2 == 1 {
        update(paths, lambda - 1, psi);
    }
}

/// Top-`rho` fork selection by repeated linear scans (largest metric, then
/// lowest path index, then bit 1).
fn choose_forks<T: Likelihood>(paths: &[Option<NaivePath<T>>], m: usize, list_size: usize) -> Vec<[bool; 2]> {
    let active = paths.iter().flatten().count();
    let rho = (2 * active).min(list_size);
    let mut marks = vec![[false; 2]; list_size];
    for _ in 0..rho {
        let mut best: Option<(usize, usize, &T)> = None;
        for (ell, path) in paths.iter().enumerate() {
            let Some(path) = path else { continue };
            for bit in [1, 0] {
                if marks[ell][bit] {
                    continue;
                }
                let v = &path.p[m][0][bit];
                if best.is_none_or(|(_, _, b)| v > b) {
                    best = Some((ell, bit, v));
                }
            }
        }
        let (ell, bit, _) = best.unwrap();
        marks[ell][bit] = true;
    }
    marks
}

/// `u` with `polar_transform(u) = c`, by Gaussian elimination over GF(2)
/// on the generator matrix assembled from the transform of unit vectors.
pub fn inverse_by_solving(c: &[u8]) -> Vec<u8> {
    let n = c.len();
    // Augmented system: sum_i u_i * row_i = c, i.e. column j gives one equation.
    let rows: Vec<Vec<u8>> = (0..n)
        .map(|i| {
            let mut e = vec![0u8; n];
            e[i] = 1;
            polar_transform(&e).unwrap().into_inner()
        })
        .collect();
    let mut eqs: Vec<(Vec<u8>, u8)> = (0..n).map(|j| ((0..n).map(|i| rows[i][j]).collect(), c[j])).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| eqs[r].0[col] == 1).expect("generator is invertible");
        eqs.swap(col, pivot);
        let (head, tail) = eqs.split_at_mut(col + 1);
        let (before, pivot_row) = head.split_at_mut(col);
        let p = &pivot_row[0];
        for r in before.iter_mut().chain(tail.iter_mut()) {
            if r.0[col] == 1 {
                r.0.iter_mut().zip(&p.0).for_each(|(x, y)| *x ^= y);
                r.1 ^= p.1;
            }
        }
    }
    eqs.iter().map(|e| e.1).collect()
}

/// `W(y | c)` as a product of per-position likelihoods.
pub fn word_likelihood(probs: &[ProbPair<f64>], c: &[u8]) -> f64 {
    probs.iter().zip(c).map(|(p, &b)| *p.get(b)).product()
}

/// Brute force over every codeword of `spec`: the most likely one and its
/// likelihood.
pub fn ml_decode(spec: &CodeSpec, probs: &[ProbPair<f64>]) -> (Vec<u8>, f64) {
    let k = spec.k();
    let mut best = (Vec::new(), -1.0);
    for word in 0u64..(1u64 << k) {
        let info: Vec<u8> = (0..k).map(|i| ((word >> i) & 1) as u8).collect();
        let mut u = vec![0u8; spec.n()];
        for (pos, v) in spec.frozen_entries() {
            u[pos] = v;
        }
        for (&pos, &b) in spec.unfrozen_positions().iter().zip(&info) {
            u[pos] = b;
        }
        let c = polar_transform(&u).unwrap().into_inner();
        let w = word_likelihood(probs, &c);
        if w > best.1 {
            best = (c, w);
        }
    }
    best
}

#[derive(Clone, Copy, Debug)]
pub enum Kind {
    Bsc,
    Awgn,
}

/// Random frozen set of random dimension (frozen values random too).
pub fn random_spec<R: Rng>(rng: &mut R, n: usize) -> CodeSpec {
    let k = rng.random_range(1..=n);
    let positions = sample(rng, n, n - k).into_vec();
    let frozen: Vec<(usize, u8)> = positions
        .into_iter()
        .map(|p| (p, rng.random_range(0..=1u8)))
        .collect();
    CodeSpec::new(n, &frozen, 0).unwrap()
}

/// Random channel of the given kind with a moderately noisy parameter.
pub fn random_model<R: Rng>(rng: &mut R, kind: Kind) -> ChannelModel {
    match kind {
        Kind::Bsc => ChannelModel::bsc(rng.random_range(0.01..0.3)).unwrap(),
        Kind::Awgn => ChannelModel::awgn(rng.random_range(0.4..1.2)).unwrap(),
    }
}

/// Encodes a random payload, transmits it and returns the codeword and the
/// channel likelihoods.
pub fn noisy_instance<R: Rng>(
    rng: &mut R,
    spec: &CodeSpec,
    model: &ChannelModel,
    check: Option<&OuterCode>,
) -> (BitVec, Vec<ProbPair<f64>>) {
    let info: Vec<u8> = (0..spec.info_len()).map(|_| rng.random_range(0..=1u8)).collect();
    let u = build_u(&info, spec, check).unwrap();
    let c = polar_transform(u.as_slice()).unwrap();
    let y = model.transmit(&c, rng);
    (c, model.prob_pairs(&y).unwrap())
}
