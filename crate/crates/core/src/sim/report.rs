use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

use crate::channel::{snr_db_to_sigma, ChannelModel};
use crate::encoder::{Crc, OuterCode};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::sim::trials::{run_point, PointConfig};
use crate::types::CodeSpec;

const Z_975: f64 = 1.959_963_984_540_054;

/// Outer-check setting of a sweep cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrcMode {
    Off,
    /// CRC of the given width (8, 16 or 32) on the last unfrozen positions.
    Bits(usize),
}

impl CrcMode {
    pub fn width(self) -> usize {
        match self {
            CrcMode::Off => 0,
            CrcMode::Bits(r) => r,
        }
    }
}

impl fmt::Display for CrcMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrcMode::Off => f.write_str("off"),
            CrcMode::Bits(r) => write!(f, "{r}"),
        }
    }
}

impl FromStr for CrcMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "off" => Ok(CrcMode::Off),
            "8" => Ok(CrcMode::Bits(8)),
            "16" => Ok(CrcMode::Bits(16)),
            "32" => Ok(CrcMode::Bits(32)),
            other => Err(Error::config("crc", format!("expected off, 8, 16 or 32, got {other:?}"))),
        }
    }
}

/// A grid of (Eb/N0, list size, CRC mode) cells over the AWGN channel.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Frozen set shared by all cells. Its own check width is ignored; each
    /// cell uses the width of its CRC mode.
    pub spec: CodeSpec,
    pub snr_db: Vec<f64>,
    pub list_sizes: Vec<usize>,
    pub crc_modes: Vec<CrcMode>,
    pub trials: u64,
    /// Every cell uses this seed, so cells see the same noise realizations.
    pub seed: u64,
    pub max_errors: Option<u64>,
    pub exec: Execution,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        if self.list_sizes.contains(&0) {
            return Err(Error::config("list", "list sizes must be at least 1"));
        }
        if let Some(bad) = self.snr_db.iter().find(|s| !s.is_finite()) {
            return Err(Error::config("snr", format!("{bad} is not a finite value")));
        }
        if self.max_errors == Some(0) {
            return Err(Error::config("max_errors", "must be at least 1"));
        }
        for mode in &self.crc_modes {
            if mode.width() >= self.spec.k() {
                return Err(Error::config(
                    "crc",
                    format!("{}-bit check leaves no payload in k = {}", mode.width(), self.spec.k()),
                ));
            }
        }
        Ok(())
    }
}

/// One row of a sweep report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    #[serde(rename = "L")]
    pub list_size: usize,
    pub crc: String,
    pub snr_db: f64,
    pub sigma: f64,
    pub trials: u64,
    pub word_errors: u64,
    pub wer: f64,
    pub wer_ci_lo: f64,
    pub wer_ci_hi: f64,
    pub bit_errors: u64,
    pub ber: f64,
    /// Fraction of trials ending in an ML-bound hit.
    pub ml_bound: f64,
    pub seed: u64,
    pub ml_bound_hits: u64,
    pub crc_fallbacks: u64,
    pub copy_elements: u64,
    /// Wall-clock seconds; the only field that differs between identical runs.
    pub wall_time_s: f64,
}

/// CSV projection of [`CellReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    #[serde(rename = "L")]
    pub list_size: usize,
    pub crc: String,
    pub snr_db: f64,
    pub sigma: f64,
    pub trials: u64,
    pub word_errors: u64,
    pub wer: f64,
    pub wer_ci_lo: f64,
    pub wer_ci_hi: f64,
    pub bit_errors: u64,
    pub ber: f64,
    pub ml_bound: f64,
    pub seed: u64,
}

impl From<&CellReport> for CsvRow {
    fn from(c: &CellReport) -> Self {
        CsvRow {
            n: c.n,
            k: c.k,
            r: c.r,
            list_size: c.list_size,
            crc: c.crc.clone(),
            snr_db: c.snr_db,
            sigma: c.sigma,
            trials: c.trials,
            word_errors: c.word_errors,
            wer: c.wer,
            wer_ci_lo: c.wer_ci_lo,
            wer_ci_hi: c.wer_ci_hi,
            bit_errors: c.bit_errors,
            ber: c.ber,
            ml_bound: c.ml_bound,
            seed: c.seed,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub cells: Vec<CellReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::config("format", format!("expected csv or json, got {other:?}"))),
        }
    }
}

/// Two-sided 95% interval for a binomial proportion: normal approximation,
/// or Clopper-Pearson when fewer than ten successes were observed.
pub fn confidence_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let (x, n) = (successes as f64, trials as f64);
    if successes < 10 {
        let lo = if successes == 0 {
            0.0
        } else {
            Beta::new(x, n - x + 1.0)
                .expect("positive shape parameters")
                .inverse_cdf(0.025)
        };
        let hi = if successes == trials {
            1.0
        } else {
            Beta::new(x + 1.0, n - x)
                .expect("positive shape parameters")
                .inverse_cdf(0.975)
        };
        return (lo, hi);
    }
    let p = x / n;
    let half = Z_975 * (p * (1.0 - p) / n).sqrt();
    ((p - half).max(0.0), (p + half).min(1.0))
}

/// Runs every cell of the grid in order: SNR, then list size, then CRC mode.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Report> {
    cfg.validate()?;
    let mut cells = Vec::new();
    for &snr_db in &cfg.snr_db {
        for &list_size in &cfg.list_sizes {
            for &mode in &cfg.crc_modes {
                cells.push(run_cell(cfg, snr_db, list_size, mode)?);
            }
        }
    }
    Ok(Report { cells })
}

fn run_cell(cfg: &SweepConfig, snr_db: f64, list_size: usize, mode: CrcMode) -> Result<CellReport> {
    let spec = cfg.spec.clone().with_crc_width(mode.width())?;
    let check = match mode {
        CrcMode::Off => None,
        CrcMode::Bits(r) => Some(OuterCode::Crc(Crc::standard(r)?)),
    };
    let sigma = snr_db_to_sigma(snr_db, spec.rate())?;
    let stats = run_point(&PointConfig {
        spec: &spec,
        model: ChannelModel::awgn(sigma)?,
        list_size,
        check: check.as_ref(),
        trials: cfg.trials,
        seed: cfg.seed,
        max_errors: cfg.max_errors,
        exec: cfg.exec,
    })?;
    let (wer_ci_lo, wer_ci_hi) = confidence_interval(stats.word_errors, stats.trials);
    let info_bits = stats.trials * spec.info_len() as u64;
    Ok(CellReport {
        n: spec.n(),
        k: spec.k(),
        r: spec.crc_width(),
        list_size,
        crc: mode.to_string(),
        snr_db,
        sigma,
        trials: stats.trials,
        word_errors: stats.word_errors,
        wer: stats.wer(),
        wer_ci_lo,
        wer_ci_hi,
        bit_errors: stats.bit_errors,
        ber: if info_bits == 0 { 0.0 } else { stats.bit_errors as f64 / info_bits as f64 },
        ml_bound: stats.ml_bound_rate(),
        seed: cfg.seed,
        ml_bound_hits: stats.ml_bound_hits,
        crc_fallbacks: stats.crc_fallbacks,
        copy_elements: stats.copy_elements,
        wall_time_s: stats.wall_time.as_secs_f64(),
    })
}

pub fn report_to_string(report: &Report, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.write_record(CSV_HEADER).map_err(csv_err)?;
            for cell in &report.cells {
                w.serialize(CsvRow::from(cell)).map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Numeric(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| Error::Numeric(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// Column order of the CSV report.
pub const CSV_HEADER: [&str; 16] = [
    "n", "k", "r", "L", "crc", "snr_db", "sigma", "trials", "word_errors", "wer", "wer_ci_lo",
    "wer_ci_hi", "bit_errors", "ber", "ml_bound", "seed",
];

fn csv_err(e: csv::Error) -> Error {
    Error::Numeric(format!("csv serialization failed: {e}"))
}

pub fn emit_report(report: &Report, format: ReportFormat, path: &Path) -> Result<()> {
    let text = report_to_string(report, format)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Reads back the rows of a CSV report.
pub fn parse_csv_report(text: &str) -> Result<Vec<CsvRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    reader
        .deserialize()
        .enumerate()
        .map(|(i, row)| {
            row.map_err(|e| Error::Parse {
                line: i + 2,
                message: e.to_string(),
            })
        })
        .collect()
}
