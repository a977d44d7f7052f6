//! Run configuration: defaults, an optional `key = value` file, and flags.
//!
//! Flags win over the environment, which wins over the file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use ftvol_core::{Estimator, Horizon, Normalization, ReturnKind, Shape};
use serde_json::json;

use crate::error::CliError;
use crate::ingest::DateFormat;

/// Environment variable that sets the output directory.
pub const OUT_DIR_ENV: &str = "FTVOL_OUT_DIR";

pub fn parse_kind(s: &str) -> Result<ReturnKind, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "simple" => Ok(ReturnKind::Simple),
        "log" => Ok(ReturnKind::Log),
        other => Err(format!("unknown return kind `{other}` (simple, log)")),
    }
}

pub fn parse_shape(s: &str) -> Result<Shape, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "hat" => Ok(Shape::Hat),
        "z" | "zshaped" | "z-shaped" => Ok(Shape::ZShaped),
        other => Err(format!("unknown shape `{other}` (hat, z)")),
    }
}

pub fn parse_normalization(s: &str) -> Result<Normalization, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "exact" => Ok(Normalization::Exact),
        "paper" => Ok(Normalization::Paper),
        other => Err(format!("unknown normalization `{other}` (exact, paper)")),
    }
}

pub fn parse_estimator(s: &str) -> Result<Estimator, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "population" => Ok(Estimator::Population),
        "sample" => Ok(Estimator::Sample),
        other => Err(format!("unknown estimator `{other}` (population, sample)")),
    }
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        other => Err(format!("expected a boolean, got `{other}`")),
    }
}

/// `yearly:252,monthly:21` or bare day counts `252,21`.
pub fn parse_horizons(s: &str) -> Result<Vec<Horizon>, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (name, days) = match item.split_once(':') {
            Some((n, d)) => (n.trim().to_string(), d.trim()),
            None => (format!("T{item}"), item),
        };
        let days: usize = days.parse().map_err(|_| format!("bad horizon `{item}`"))?;
        if days < 2 {
            return Err(format!("horizon `{item}` must be at least 2 days"));
        }
        out.push(Horizon::new(name, days));
    }
    if out.is_empty() {
        return Err("no horizons given".to_string());
    }
    Ok(out)
}

/// `0:0.005,1000:0.03` as `(start day, vol)` pairs.
pub fn parse_regimes(s: &str) -> Result<Vec<(usize, f64)>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|item| {
            let (start, vol) = item
                .split_once(':')
                .ok_or_else(|| format!("bad regime `{item}`, expected start:vol"))?;
            let start = start
                .trim()
                .parse()
                .map_err(|_| format!("bad regime start in `{item}`"))?;
            let vol = vol
                .trim()
                .parse()
                .map_err(|_| format!("bad regime vol in `{item}`"))?;
            Ok((start, vol))
        })
        .collect()
}

/// Effective settings shared by every command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub return_kind: ReturnKind,
    pub shape: Shape,
    pub normalization: Normalization,
    pub horizons: Vec<Horizon>,
    pub centered: bool,
    pub estimator: Estimator,
    pub annualize: bool,
    pub lag: i64,
    pub out_dir: PathBuf,
    pub date_format: DateFormat,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            return_kind: ReturnKind::Simple,
            shape: Shape::Hat,
            normalization: Normalization::Exact,
            horizons: Horizon::defaults(),
            centered: true,
            estimator: Estimator::Population,
            annualize: false,
            lag: 0,
            out_dir: PathBuf::from("."),
            date_format: DateFormat::Iso,
            seed: 0,
        }
    }
}

impl RunConfig {
    /// Applies `key = value` lines. Blank lines and `#` comments are skipped;
    /// unknown keys are an error.
    pub fn apply_file_contents(&mut self, text: &str) -> Result<(), CliError> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            self.set(key, value)
                .map_err(|e| CliError::Config(format!("line {}: {key}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.apply_file_contents(&text)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "input" => self.input = Some(PathBuf::from(value)),
            "kind" | "return_kind" => self.return_kind = parse_kind(value)?,
            "shape" => self.shape = parse_shape(value)?,
            "normalization" => self.normalization = parse_normalization(value)?,
            "horizons" => self.horizons = parse_horizons(value)?,
            "horizon" => self.horizons = parse_horizons(value)?,
            "centered" => self.centered = parse_bool(value)?,
            "estimator" => self.estimator = parse_estimator(value)?,
            "annualize" => self.annualize = parse_bool(value)?,
            "lag" => self.lag = value.parse().map_err(|_| format!("bad lag `{value}`"))?,
            "out_dir" | "output_dir" => self.out_dir = PathBuf::from(value),
            "date_format" => {
                self.date_format = value.parse().unwrap_or_default();
            }
            "seed" => self.seed = value.parse().map_err(|_| format!("bad seed `{value}`"))?,
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    pub fn input_path(&self) -> Result<&Path, CliError> {
        self.input
            .as_deref()
            .ok_or_else(|| CliError::Config("no input file given (--input)".to_string()))
    }

    /// The configuration as recorded in metadata sidecars.
    pub fn to_json(&self) -> serde_json::Value {
        let horizons: BTreeMap<&str, usize> = self
            .horizons
            .iter()
            .map(|h| (h.name.as_str(), h.days))
            .collect();
        json!({
            "input": self.input.as_ref().map(|p| p.display().to_string()),
            "return_kind": self.return_kind.as_str(),
            "shape": self.shape.as_str(),
            "normalization": self.normalization.as_str(),
            "horizons": horizons,
            "centered": self.centered,
            "estimator": self.estimator.as_str(),
            "annualize": self.annualize,
            "lag": self.lag,
            "out_dir": self.out_dir.display().to_string(),
            "date_format": self.date_format.as_str(),
            "seed": self.seed,
        })
    }
}
