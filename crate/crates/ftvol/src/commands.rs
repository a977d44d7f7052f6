//! The four subcommands, callable in-process.

use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use chrono::{Datelike, Days, NaiveDate, Weekday};
use ftvol_core::{
    annualize, compare, ft_volatility, returns, synth_prices, PriceSeries, ReturnSeries, SynthSpec,
    TRADING_DAYS_PER_YEAR,
};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::ingest::{load_prices, to_calendar_day};
use crate::output::{
    adjusted_csv, components_csv, fmt_date, fmt_num, node_grid_csv, pointwise_csv, returns_csv,
    scatter_csv, series_csv, write_with_meta, ReportInput, ReportJson,
};

/// Prices and the returns derived from them.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub prices: PriceSeries,
    pub returns: ReturnSeries,
}

pub fn load(config: &RunConfig) -> Result<Loaded, CliError> {
    let path = config.input_path()?;
    let file = File::open(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let prices = load_prices(BufReader::new(file), &config.date_format).map_err(|source| {
        CliError::Ingest {
            path: path.to_path_buf(),
            source,
        }
    })?;
    let returns = returns(&prices, config.return_kind)?;
    Ok(Loaded { prices, returns })
}

fn meta(config: &RunConfig, command: &str, file: &str, extra: Value) -> Value {
    let mut m = json!({
        "tool": "ftvol",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "file": file,
        "config": config.to_json(),
    });
    if let (Value::Object(base), Value::Object(extra)) = (&mut m, extra) {
        base.extend(extra);
    }
    m
}

pub fn cmd_returns(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let data = load(config)?;
    let name = "returns.csv";
    let extra = json!({ "return_kind": config.return_kind.as_str(), "rows": data.returns.len() });
    write_with_meta(
        &config.out_dir.join(name),
        returns_csv(&data.returns).as_bytes(),
        &meta(config, "returns", name, extra),
    )
}

/// Writes the deviation, baseline, envelope and node components for each
/// configured horizon.
pub fn cmd_ftvol(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let data = load(config)?;
    let r = &data.returns;
    let mut written = Vec::new();
    for h in &config.horizons {
        let d = ft_volatility(r, h.days, config.shape, config.normalization)?;
        let mut dev = d.to_series();
        if config.annualize {
            dev = annualize(&dev, TRADING_DAYS_PER_YEAR)?;
        }
        let base = json!({
            "method": "ft",
            "horizon": h.days,
            "horizon_name": h.name,
            "nodes": d.node_count(),
            "shape": config.shape.as_str(),
            "normalization": config.normalization.as_str(),
            "return_kind": config.return_kind.as_str(),
        });
        let prefix = format!("ftvol_T{}", h.days);
        let files: [(String, String, Value); 4] = [
            (
                format!("{prefix}_deviation.csv"),
                series_csv(r, &dev),
                json!({
                    "series": "deviation",
                    "annualized": config.annualize,
                    // scaling the FT deviation by sqrt(252) mirrors the STD convention
                    "annualization_is_extension": config.annualize,
                }),
            ),
            (
                format!("{prefix}_baseline.csv"),
                node_grid_csv(r, &d, d.baseline(), 1.0),
                json!({ "series": "baseline", "annualized": false }),
            ),
            (
                format!("{prefix}_envelope.csv"),
                node_grid_csv(r, &d, d.envelope(), 1.0),
                json!({ "series": "envelope", "annualized": false }),
            ),
            (
                format!("{prefix}_components.csv"),
                components_csv(r, &d),
                json!({ "series": "components", "annualized": false }),
            ),
        ];
        for (name, body, extra) in files {
            let mut extra = extra;
            if let (Value::Object(e), Value::Object(b)) = (&mut extra, base.clone()) {
                e.extend(b);
            }
            written.extend(write_with_meta(
                &config.out_dir.join(&name),
                body.as_bytes(),
                &meta(config, "ftvol", &name, extra),
            )?);
        }
    }
    Ok(written)
}

/// Runs the comparison and writes `report.json` plus per-horizon tables.
pub fn cmd_compare(config: &RunConfig) -> Result<(ReportJson, Vec<PathBuf>), CliError> {
    let data = load(config)?;
    let r = &data.returns;
    let options = ftvol_core::CompareOptions {
        normalization: config.normalization,
        centered: config.centered,
        estimator: config.estimator,
        lag: config.lag,
        annualize: config.annualize,
    };
    let result = compare(r, &config.horizons, config.shape, &options)?;
    let dates = data.prices.dates();
    let input = ReportInput {
        rows: data.prices.len(),
        start: dates
            .and_then(|d| d.first().copied())
            .map(|d| fmt_date(Some(d))),
        end: dates
            .and_then(|d| d.last().copied())
            .map(|d| fmt_date(Some(d))),
        return_kind: config.return_kind.as_str().to_string(),
    };
    let report = ReportJson::new(input, &result.report);

    let mut written = Vec::new();
    for c in &result.details {
        let name = &c.record.name;
        let extra = json!({
            "horizon": c.record.horizon,
            "horizon_name": name,
            "nodes": c.record.nodes,
            "shape": config.shape.as_str(),
            "normalization": config.normalization.as_str(),
            "estimator": config.estimator.as_str(),
            "centered": config.centered,
            "lag": config.lag,
            "annualized": config.annualize,
            "annualization_is_extension": config.annualize,
            "return_kind": config.return_kind.as_str(),
        });
        let tables = [
            (format!("compare_{name}_pointwise.csv"), pointwise_csv(r, c)),
            (format!("compare_{name}_scatter.csv"), scatter_csv(c)),
            (format!("compare_{name}_adjusted.csv"), adjusted_csv(r, c)),
        ];
        for (file, body) in tables {
            written.extend(write_with_meta(
                &config.out_dir.join(&file),
                body.as_bytes(),
                &meta(config, "compare", &file, extra.clone()),
            )?);
        }
    }
    let mut body = serde_json::to_vec_pretty(&report).expect("report serializes");
    body.push(b'\n');
    written.extend(write_with_meta(
        &config.out_dir.join("report.json"),
        &body,
        &meta(config, "compare", "report.json", json!({})),
    )?);
    Ok((report, written))
}

/// Settings specific to `synth`.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub days: usize,
    pub drift: f64,
    pub vol: f64,
    pub initial_price: f64,
    pub regimes: Vec<(usize, f64)>,
    /// Date of the first price; later prices fall on the following weekdays.
    pub start_date: NaiveDate,
    /// Defaults to `synth.csv` in the output directory.
    pub output: Option<PathBuf>,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            days: 2000,
            drift: 0.0,
            vol: 0.01,
            initial_price: 100.0,
            regimes: Vec::new(),
            start_date: NaiveDate::from_ymd_opt(2000, 1, 3).expect("valid date"),
            output: None,
        }
    }
}

fn weekdays_from(start: NaiveDate, count: usize) -> Vec<NaiveDate> {
    let mut out = Vec::with_capacity(count);
    let mut d = start;
    while out.len() < count {
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(d);
        }
        d = d + Days::new(1);
    }
    out
}

pub fn cmd_synth(config: &RunConfig, synth: &SynthConfig) -> Result<Vec<PathBuf>, CliError> {
    let spec = SynthSpec {
        drift: synth.drift,
        vol: synth.vol,
        initial_price: synth.initial_price,
        length: synth.days,
        seed: config.seed,
        regimes: synth.regimes.clone(),
    };
    let prices = synth_prices(&spec)?;
    let dates = weekdays_from(synth.start_date, prices.len());
    let prices = prices.with_dates(dates.iter().copied().map(to_calendar_day).collect())?;
    let mut body = String::from("date,close\n");
    for (d, p) in dates.iter().zip(prices.prices()) {
        let _ = writeln!(body, "{},{}", d.format("%Y-%m-%d"), fmt_num(*p));
    }
    let path = synth
        .output
        .clone()
        .unwrap_or_else(|| config.out_dir.join("synth.csv"));
    let file = path
        .file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_default();
    let regimes: Vec<Value> = synth
        .regimes
        .iter()
        .map(|(s, v)| json!({ "start": s, "vol": v }))
        .collect();
    let extra = json!({
        "synth": {
            "days": synth.days,
            "drift": synth.drift,
            "vol": synth.vol,
            "initial_price": synth.initial_price,
            "regimes": regimes,
            "start_date": synth.start_date.format("%Y-%m-%d").to_string(),
            "seed": config.seed,
        }
    });
    write_with_meta(&path, body.as_bytes(), &meta(config, "synth", &file, extra))
}
