//! Output files: CSV tables, JSON sidecars and the comparison report.
//!
//! All tables are UTF-8, comma separated, with a header row and LF line
//! endings. Numbers carry 10 significant digits; undefined values are empty
//! cells.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use ftvol_core::{
    CalendarDay, ComparisonReport, FtVolDecomposition, HorizonComparison, ReturnSeries,
    VolatilitySeries,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::ingest::from_calendar_day;

/// `x` rounded to 10 significant digits, printed in its shortest form.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{x:.9e}").parse().unwrap_or(x);
    format!("{rounded}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

pub fn fmt_date(d: Option<CalendarDay>) -> String {
    d.and_then(from_calendar_day)
        .map(|d: NaiveDate| d.format("%Y-%m-%d").to_string())
        .unwrap_or_default()
}

/// Calendar date of trading day `index` in a return series, if known.
fn return_date(r: &ReturnSeries, index: usize) -> Option<CalendarDay> {
    let k = index.checked_sub(r.first_index())?;
    r.dates().and_then(|d| d.get(k).copied())
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.flush().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Sidecar path: `x.csv` -> `x.csv.meta.json`.
pub fn meta_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    path.with_file_name(name)
}

/// Writes a file together with its metadata sidecar.
pub fn write_with_meta(
    path: &Path,
    contents: &[u8],
    meta: &serde_json::Value,
) -> Result<Vec<PathBuf>, CliError> {
    write_atomic(path, contents)?;
    let sidecar = meta_path(path);
    let mut json = serde_json::to_vec_pretty(meta).expect("metadata serializes");
    json.push(b'\n');
    write_atomic(&sidecar, &json)?;
    Ok(vec![path.to_path_buf(), sidecar])
}

pub fn returns_csv(r: &ReturnSeries) -> String {
    let mut out = String::from("index,date,return\n");
    for (t, x) in r.indices().zip(r.values()) {
        let _ = writeln!(out, "{t},{},{}", fmt_date(return_date(r, t)), fmt_num(*x));
    }
    out
}

/// `index,date,value,defined` over the whole return index.
pub fn series_csv(r: &ReturnSeries, v: &VolatilitySeries) -> String {
    let mut out = String::from("index,date,value,defined\n");
    for (k, x) in v.values().iter().enumerate() {
        let t = v.first_index() + k;
        let _ = writeln!(
            out,
            "{t},{},{},{}",
            fmt_date(return_date(r, t)),
            fmt_opt(*x),
            x.is_some()
        );
    }
    out
}

/// Same layout as [`series_csv`] for a signal defined between the first and
/// last node.
pub fn node_grid_csv(
    r: &ReturnSeries,
    d: &FtVolDecomposition,
    values: &[f64],
    scale: f64,
) -> String {
    let mut out = String::from("index,date,value,defined\n");
    for t in r.indices() {
        let v = t
            .checked_sub(d.first_index())
            .and_then(|k| values.get(k))
            .map(|x| x * scale);
        let _ = writeln!(
            out,
            "{t},{},{},{}",
            fmt_date(return_date(r, t)),
            fmt_opt(v),
            v.is_some()
        );
    }
    out
}

/// `node,index,date,B,H` per partition node.
pub fn components_csv(r: &ReturnSeries, d: &FtVolDecomposition) -> String {
    let mut out = String::from("node,index,date,B,H\n");
    let b = d.returns_transform().components();
    let h = d.abs_returns_transform().components();
    for (i, tau) in d.partition().nodes().enumerate() {
        let t = tau as usize;
        let _ = writeln!(
            out,
            "{i},{t},{},{},{}",
            fmt_date(return_date(r, t)),
            fmt_num(b[i]),
            fmt_num(h[i])
        );
    }
    out
}

/// `index,date,ft,std,defined_std`
pub fn pointwise_csv(r: &ReturnSeries, c: &HorizonComparison) -> String {
    let mut out = String::from("index,date,ft,std,defined_std\n");
    for t in r.indices() {
        let s = c.std.get(t);
        let _ = writeln!(
            out,
            "{t},{},{},{},{}",
            fmt_date(return_date(r, t)),
            fmt_opt(c.ft.get(t)),
            fmt_opt(s),
            s.is_some()
        );
    }
    out
}

/// `index,ft,std` for aligned pairs.
pub fn scatter_csv(c: &HorizonComparison) -> String {
    let mut out = String::from("index,ft,std\n");
    for k in 0..c.pairs.len() {
        let _ = writeln!(
            out,
            "{},{},{}",
            c.pairs.indices[k],
            fmt_num(c.pairs.ft[k]),
            fmt_num(c.pairs.std[k])
        );
    }
    out
}

/// `index,date,return,baseline_adjusted,mean_adjusted`
pub fn adjusted_csv(r: &ReturnSeries, c: &HorizonComparison) -> String {
    let mut out = String::from("index,date,return,baseline_adjusted,mean_adjusted\n");
    for (k, (t, x)) in r.indices().zip(r.values()).enumerate() {
        let _ = writeln!(
            out,
            "{t},{},{},{},{}",
            fmt_date(return_date(r, t)),
            fmt_num(*x),
            fmt_opt(c.baseline_adjusted[k]),
            fmt_opt(c.mean_adjusted[k])
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportInput {
    pub rows: usize,
    pub start: Option<String>,
    pub end: Option<String>,
    pub return_kind: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportHorizon {
    pub name: String,
    #[serde(rename = "T")]
    pub horizon: usize,
    pub nodes: usize,
    pub pairs: usize,
    pub pearson: Option<f64>,
    pub mean_ft: Option<f64>,
    pub mean_std: Option<f64>,
    /// Why `pearson` is null, if it is.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pearson_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub input: ReportInput,
    pub horizons: Vec<ReportHorizon>,
}

impl ReportJson {
    pub fn new(input: ReportInput, report: &ComparisonReport) -> Self {
        let horizons = report
            .horizons
            .iter()
            .map(|h| ReportHorizon {
                name: h.name.clone(),
                horizon: h.horizon,
                nodes: h.nodes,
                pairs: h.pairs,
                pearson: h.pearson,
                mean_ft: h.mean_ft,
                mean_std: h.mean_std,
                pearson_error: h.pearson_error.as_ref().map(|e| format!("{e:?}")),
            })
            .collect();
        Self { input, horizons }
    }
}
