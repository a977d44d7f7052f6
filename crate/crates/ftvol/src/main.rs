use std::path::PathBuf;
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};
use ftvol::commands::{cmd_compare, cmd_ftvol, cmd_returns, cmd_synth, SynthConfig};
use ftvol::config::{
    parse_estimator, parse_horizons, parse_kind, parse_normalization, parse_regimes, parse_shape,
    RunConfig, OUT_DIR_ENV,
};
use ftvol::ingest::DateFormat;
use ftvol::CliError;
use ftvol_core::{Estimator, Horizon, Normalization, ReturnKind, Shape};

// aliases keep clap from treating these as repeated flags
type Horizons = Vec<Horizon>;
type Regimes = Vec<(usize, f64)>;

/// Fuzzy-transform and rolling standard-deviation volatility of daily prices.
#[derive(Debug, Parser)]
#[command(name = "ftvol", version)]
struct Cli {
    /// `key = value` settings file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for output files.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the return series.
    Returns(InputArgs),
    /// Write FT deviation, baseline, envelope and components.
    Ftvol(FtvolArgs),
    /// Compare FT and STD volatility across horizons.
    Compare(CompareArgs),
    /// Generate a synthetic price file.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Price CSV with `date` and `close` columns.
    #[arg(long)]
    input: Option<PathBuf>,
    /// simple or log
    #[arg(long, value_parser = parse_kind)]
    kind: Option<ReturnKind>,
    /// iso, dayfirst, or a chrono format string
    #[arg(long)]
    date_format: Option<String>,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// hat or z
    #[arg(long, value_parser = parse_shape)]
    shape: Option<Shape>,
    /// exact or paper
    #[arg(long, value_parser = parse_normalization)]
    normalization: Option<Normalization>,
    /// Scale volatility by sqrt(252).
    #[arg(long)]
    annualize: bool,
}

#[derive(Debug, Args)]
struct FtvolArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    model: ModelArgs,
    /// Node spacing in days; defaults to every configured horizon.
    #[arg(long)]
    horizon: Option<usize>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    model: ModelArgs,
    /// Comma-separated `name:days` list, e.g. `yearly:252,monthly:21`.
    #[arg(long, value_parser = parse_horizons)]
    horizons: Option<Horizons>,
    /// Use trailing rather than centered STD windows.
    #[arg(long)]
    trailing: bool,
    /// population or sample
    #[arg(long, value_parser = parse_estimator)]
    estimator: Option<Estimator>,
    /// Shorthand for `--estimator sample`.
    #[arg(long, conflicts_with = "estimator")]
    sample: bool,
    /// Pair FT at day t with STD at day t - lag.
    #[arg(long, allow_negative_numbers = true)]
    lag: Option<i64>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 2000)]
    days: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Daily log drift.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    drift: f64,
    /// Daily log volatility.
    #[arg(long, default_value_t = 0.01)]
    vol: f64,
    #[arg(long, default_value_t = 100.0)]
    initial: f64,
    /// Volatility regimes as `start:vol`, e.g. `0:0.005,1000:0.03`.
    #[arg(long, value_parser = parse_regimes)]
    regimes: Option<Regimes>,
    /// Date of the first price (YYYY-MM-DD); later rows fall on weekdays.
    #[arg(long, default_value = "2000-01-03")]
    start_date: NaiveDate,
    /// Output file; defaults to `synth.csv` in the output directory.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl InputArgs {
    fn apply(&self, c: &mut RunConfig) {
        if let Some(p) = &self.input {
            c.input = Some(p.clone());
        }
        if let Some(k) = self.kind {
            c.return_kind = k;
        }
        if let Some(f) = &self.date_format {
            c.date_format = f.parse().unwrap_or(DateFormat::Iso);
        }
    }
}

impl ModelArgs {
    fn apply(&self, c: &mut RunConfig) {
        if let Some(s) = self.shape {
            c.shape = s;
        }
        if let Some(n) = self.normalization {
            c.normalization = n;
        }
        if self.annualize {
            c.annualize = true;
        }
    }
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    let mut config = RunConfig::default();
    if let Some(path) = &cli.config {
        config.apply_file(path)?;
    }
    if let Some(dir) = cli.out_dir {
        config.out_dir = dir;
    }
    match cli.command {
        Command::Returns(a) => {
            a.apply(&mut config);
            cmd_returns(&config)
        }
        Command::Ftvol(a) => {
            a.input.apply(&mut config);
            a.model.apply(&mut config);
            if let Some(t) = a.horizon {
                if t < 2 {
                    return Err(CliError::Config(format!(
                        "--horizon must be at least 2, got {t}"
                    )));
                }
                config.horizons = vec![Horizon::new(format!("T{t}"), t)];
            }
            cmd_ftvol(&config)
        }
        Command::Compare(a) => {
            a.input.apply(&mut config);
            a.model.apply(&mut config);
            if let Some(h) = a.horizons {
                config.horizons = h;
            }
            if a.trailing {
                config.centered = false;
            }
            if let Some(e) = a.estimator {
                config.estimator = e;
            }
            if a.sample {
                config.estimator = Estimator::Sample;
            }
            if let Some(l) = a.lag {
                config.lag = l;
            }
            let (report, written) = cmd_compare(&config)?;
            for h in &report.horizons {
                let p = h.pearson.map_or("n/a".to_string(), |p| format!("{p:.4}"));
                println!(
                    "{:<10} T={:<4} nodes={:<5} pairs={:<6} pearson={p}",
                    h.name, h.horizon, h.nodes, h.pairs
                );
            }
            Ok(written)
        }
        Command::Synth(a) => {
            if let Some(s) = a.seed {
                config.seed = s;
            }
            let synth = SynthConfig {
                days: a.days,
                drift: a.drift,
                vol: a.vol,
                initial_price: a.initial,
                regimes: a.regimes.unwrap_or_default(),
                start_date: a.start_date,
                output: a.output,
            };
            cmd_synth(&config, &synth)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(paths) => {
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
