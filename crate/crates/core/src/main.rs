use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use polarlist::sim::{emit_report, run_sweep, CrcMode, ReportFormat, SweepConfig};
use polarlist::{
    bhattacharyya_construct, load_spec, monte_carlo_construct, save_spec, snr_db_to_sigma, ChannelModel, CodeSpec,
    Crc, Error, Execution, ListDecoder, OuterCode, ReceivedVec,
};

#[derive(Parser)]
#[command(name = "polarlist", version, about = "Polar code construction, list decoding and error-rate sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Choose a frozen set and write the code definition.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        design: Design,
        /// Bhattacharyya seed for `bhatta`; channel parameter for `mc`.
        #[arg(long)]
        param: Option<f64>,
        /// Eb/N0 in dB for an AWGN `mc` design, instead of `--param`.
        #[arg(long)]
        snr: Option<f64>,
        #[arg(long, value_enum, default_value = "awgn")]
        channel: ChannelKind,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decode one received word and print the payload and codeword.
    Decode {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1)]
        list: usize,
        #[arg(long, default_value = "off")]
        crc: String,
        /// Whitespace-separated received symbols.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "awgn")]
        channel: ChannelKind,
        /// Crossover probability, noise deviation or erasure probability.
        #[arg(long)]
        param: Option<f64>,
        /// Eb/N0 in dB for AWGN, instead of `--param`.
        #[arg(long)]
        snr: Option<f64>,
    },
    /// Simulate a grid of Eb/N0 values, list sizes and CRC modes over AWGN.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        /// `start:stop:step` (inclusive) or a comma-separated list, in dB.
        #[arg(long)]
        snr: String,
        #[arg(long, default_value = "1")]
        list: String,
        #[arg(long, default_value = "off")]
        crc: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        out: PathBuf,
        /// Stop a cell after this many word errors.
        #[arg(long, default_value_t = 200)]
        max_errors: u64,
        /// Run every trial of every cell.
        #[arg(long)]
        no_early_stop: bool,
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Design {
    Bhatta,
    Mc,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChannelKind {
    Bsc,
    Awgn,
    Bec,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Io { .. } => 3,
                Error::Config { .. } | Error::Parse { .. } | Error::InvalidArgument(_) => 2,
                _ => 1,
            })
        }
    }
}

fn config(field: &str, message: impl Into<String>) -> Error {
    Error::Config {
        field: field.into(),
        message: message.into(),
    }
}

fn channel_model(kind: ChannelKind, param: Option<f64>, snr: Option<f64>, rate: f64) -> polarlist::Result<ChannelModel> {
    match (kind, param, snr) {
        (_, Some(_), Some(_)) => Err(config("param", "give either --param or --snr, not both")),
        (ChannelKind::Awgn, None, Some(snr)) => ChannelModel::awgn(snr_db_to_sigma(snr, rate)?),
        (_, None, Some(_)) => Err(config("snr", "only applies to the awgn channel")),
        (_, None, None) => Err(config("param", "a channel parameter is required")),
        (ChannelKind::Bsc, Some(p), None) => ChannelModel::bsc(p),
        (ChannelKind::Awgn, Some(s), None) => ChannelModel::awgn(s),
        (ChannelKind::Bec, Some(e), None) => ChannelModel::bec(e),
    }
}

fn parse_list<T: std::str::FromStr>(field: &str, text: &str) -> polarlist::Result<Vec<T>> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse()
                .map_err(|_| config(field, format!("cannot parse {tok:?}")))
        })
        .collect()
}

fn parse_snr_grid(text: &str) -> polarlist::Result<Vec<f64>> {
    if !text.contains(':') {
        return parse_list("snr", text);
    }
    let parts: Vec<f64> = text
        .split(':')
        .map(|t| t.trim().parse().map_err(|_| config("snr", format!("cannot parse {t:?}"))))
        .collect::<polarlist::Result<_>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(config("snr", "expected start:stop:step"));
    };
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() {
        return Err(config("snr", "step must be positive and bounds finite"));
    }
    if stop < start {
        return Ok(Vec::new());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

/// Attaches the check selected by `--crc` to `spec`.
fn with_crc(spec: CodeSpec, mode: CrcMode) -> polarlist::Result<(CodeSpec, Option<OuterCode>)> {
    match mode {
        CrcMode::Off => Ok((spec, None)),
        CrcMode::Bits(r) => {
            if spec.crc_width() != 0 && spec.crc_width() != r {
                return Err(config("crc", format!("code file declares a {}-bit check", spec.crc_width())));
            }
            let spec = spec.with_crc_width(r).map_err(|e| config("crc", e.to_string()))?;
            Ok((spec, Some(OuterCode::Crc(Crc::standard(r)?))))
        }
    }
}

fn run(command: Command) -> polarlist::Result<()> {
    match command {
        Command::Construct {
            n,
            k,
            design,
            param,
            snr,
            channel,
            trials,
            seed,
            out,
        } => {
            let spec = match design {
                Design::Bhatta => {
                    if snr.is_some() {
                        return Err(config("snr", "the bhatta design takes --param"));
                    }
                    bhattacharyya_construct(n, k, param.unwrap_or(0.5))?
                }
                Design::Mc => {
                    let rate = k as f64 / n.max(1) as f64;
                    let model = channel_model(channel, param, snr, rate)?;
                    monte_carlo_construct(n, k, &model, trials, seed, Execution::Parallel)?
                }
            };
            save_spec(&spec, &out)
        }
        Command::Decode {
            spec,
            list,
            crc,
            input,
            channel,
            param,
            snr,
        } => {
            let (spec, check) = with_crc(load_spec(&spec)?, crc.parse()?)?;
            let model = channel_model(channel, param, snr, spec.rate())?;
            let text = fs::read_to_string(&input).map_err(|e| Error::Io {
                path: input.clone(),
                source: e,
            })?;
            let y = ReceivedVec(
                text.split_whitespace()
                    .map(|t| model.parse_symbol(t))
                    .collect::<polarlist::Result<_>>()?,
            );
            if y.len() != spec.n() {
                return Err(config("in", format!("expected {} symbols, found {}", spec.n(), y.len())));
            }
            let out = ListDecoder::new(list).decode(&spec, &model.prob_pairs(&y)?, check.as_ref())?;
            println!("info {}", out.info_hat);
            println!("codeword {}", out.c_hat);
            if out.metadata.check_fallback {
                eprintln!("warning: no list entry passed the CRC");
            }
            Ok(())
        }
        Command::Sweep {
            spec,
            snr,
            list,
            crc,
            trials,
            seed,
            format,
            out,
            max_errors,
            no_early_stop,
            sequential,
        } => {
            let cfg = SweepConfig {
                spec: load_spec(&spec)?,
                snr_db: parse_snr_grid(&snr)?,
                list_sizes: parse_list("list", &list)?,
                crc_modes: crc.split(',').map(str::parse).collect::<polarlist::Result<_>>()?,
                trials,
                seed,
                max_errors: (!no_early_stop).then_some(max_errors),
                exec: if sequential {
                    Execution::Sequential
                } else {
                    Execution::Parallel
                },
            };
            let format: ReportFormat = format.parse()?;
            let report = run_sweep(&cfg)?;
            emit_report(&report, format, &out)
        }
    }
}
