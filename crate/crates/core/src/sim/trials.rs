use std::time::{Duration, Instant};

use rand::Rng;
use serde::Serialize;

use crate::channel::{stream_rng, ChannelModel};
use crate::encoder::{build_u, polar_transform, OuterCode};
use crate::error::{Error, Result};
use crate::exec::{fold_range, Execution};
use crate::list::ListDecoder;
use crate::types::CodeSpec;

/// Trials are run in fixed-size batches; early stopping is only checked at
/// batch boundaries so the result does not depend on scheduling.
pub const BATCH: u64 = 256;

/// Counters accumulated over the trials of one simulation point.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TrialStats {
    pub trials: u64,
    pub word_errors: u64,
    pub bit_errors: u64,
    /// Word errors where the decoded codeword is strictly more likely than
    /// the transmitted one.
    pub ml_bound_hits: u64,
    /// Decodes where an outer check was active but no list entry passed it.
    pub crc_fallbacks: u64,
    pub copy_elements: u64,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl TrialStats {
    fn merge(mut self, other: TrialStats) -> TrialStats {
        self.trials += other.trials;
        self.word_errors += other.word_errors;
        self.bit_errors += other.bit_errors;
        self.ml_bound_hits += other.ml_bound_hits;
        self.crc_fallbacks += other.crc_fallbacks;
        self.copy_elements += other.copy_elements;
        self
    }

    pub fn wer(&self) -> f64 {
        ratio(self.word_errors, self.trials)
    }

    pub fn ml_bound_rate(&self) -> f64 {
        ratio(self.ml_bound_hits, self.trials)
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Parameters of one simulation point.
#[derive(Debug, Clone)]
pub struct PointConfig<'a> {
    pub spec: &'a CodeSpec,
    pub model: ChannelModel,
    pub list_size: usize,
    /// Outer check used both to fill the check bits and to aid selection.
    /// Without one, any check bits in `spec` still carry the default CRC but
    /// the decoder ignores them.
    pub check: Option<&'a OuterCode>,
    pub trials: u64,
    pub seed: u64,
    /// Stop once this many word errors have been seen.
    pub max_errors: Option<u64>,
    pub exec: Execution,
}

/// Encodes random payloads, sends them through the channel and list-decodes
/// them. Trial `t` draws everything from stream `t` of `seed`.
pub fn run_point(cfg: &PointConfig<'_>) -> Result<TrialStats> {
    if cfg.trials == 0 {
        return Err(Error::arg("at least one trial is required"));
    }
    if cfg.list_size == 0 {
        return Err(Error::arg("list size must be at least 1"));
    }
    if let Some(code) = cfg.check {
        if code.width() != cfg.spec.crc_width() {
            return Err(Error::arg(format!(
                "check width {} does not match the code's crc width {}",
                code.width(),
                cfg.spec.crc_width()
            )));
        }
    }
    let start = Instant::now();
    let decoder = ListDecoder::new(cfg.list_size);
    let mut stats = TrialStats::default();
    let mut next = 0;
    while next < cfg.trials {
        let end = (next + BATCH).min(cfg.trials);
        let batch = fold_range(
            cfg.exec,
            next..end,
            || Ok(TrialStats::default()),
            |acc: Result<TrialStats>, t| {
                let mut acc = acc?;
                run_trial(cfg, &decoder, t, &mut acc)?;
                Ok(acc)
            },
            |a, b| Ok(a?.merge(b?)),
        )?;
        stats = stats.merge(batch);
        next = end;
        if cfg.max_errors.is_some_and(|cap| stats.word_errors >= cap) {
            break;
        }
    }
    stats.wall_time = start.elapsed();
    Ok(stats)
}

fn run_trial(cfg: &PointConfig<'_>, decoder: &ListDecoder, t: u64, acc: &mut TrialStats) -> Result<()> {
    let spec = cfg.spec;
    let mut rng = stream_rng(cfg.seed, t);
    let info: Vec<u8> = (0..spec.info_len()).map(|_| rng.random_range(0..=1u8)).collect();
    let u = build_u(&info, spec, cfg.check)?;
    let c = polar_transform(u.as_slice())?;
    let y = cfg.model.transmit(&c, &mut rng);
    let out = decoder.decode(spec, &cfg.model.prob_pairs(&y)?, cfg.check)?;

    acc.trials += 1;
    acc.copy_elements += out.metadata.copied_elements;
    acc.crc_fallbacks += u64::from(out.metadata.check_fallback);
    acc.bit_errors += out
        .info_hat
        .as_slice()
        .iter()
        .zip(&info)
        .filter(|(a, b)| a != b)
        .count() as u64;
    if out.c_hat != c {
        acc.word_errors += 1;
        let decoded = cfg.model.log_likelihood_word(&y, out.c_hat.as_slice())?;
        let sent = cfg.model.log_likelihood_word(&y, c.as_slice())?;
        if decoded > sent {
            acc.ml_bound_hits += 1;
        }
    }
    Ok(())
}
