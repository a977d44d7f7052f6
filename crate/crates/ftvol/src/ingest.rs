//! Daily close-price CSV ingestion.
//!
//! The header must name a `date` column and a `close` column (any case);
//! other columns are ignored. Rows may arrive in any order and are sorted by
//! date. Empty or non-numeric prices are rejected rather than filled in.

use std::io::Read;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use ftvol_core::{CalendarDay, PriceSeries};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed CSV{}: {reason}", line_suffix(*.line))]
    MalformedCsv { line: Option<u64>, reason: String },
    #[error("price on line {line} is not strictly positive ({value})")]
    NonPositivePrice { line: u64, value: f64 },
    #[error("duplicate date {date}")]
    DuplicateDate { date: NaiveDate },
    #[error("at least 2 price rows are required, found {rows}")]
    TooShort { rows: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn line_suffix(line: Option<u64>) -> String {
    line.map(|l| format!(" on line {l}")).unwrap_or_default()
}

/// How the date column is written.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum DateFormat {
    /// `YYYY-MM-DD`
    #[default]
    Iso,
    /// `DD-MM-YYYY`, `DD/MM/YYYY` or `DD.MM.YYYY`
    DayFirst,
    /// A chrono format string.
    Custom(String),
}

impl DateFormat {
    pub fn parse_date(&self, s: &str) -> Option<NaiveDate> {
        let s = s.trim();
        match self {
            DateFormat::Iso => NaiveDate::parse_from_str(s, "%Y-%m-%d").ok(),
            DateFormat::DayFirst => ["%d-%m-%Y", "%d/%m/%Y", "%d.%m.%Y"]
                .iter()
                .find_map(|f| NaiveDate::parse_from_str(s, f).ok()),
            DateFormat::Custom(f) => NaiveDate::parse_from_str(s, f).ok(),
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            DateFormat::Iso => "iso",
            DateFormat::DayFirst => "dayfirst",
            DateFormat::Custom(f) => f,
        }
    }
}

impl FromStr for DateFormat {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "iso" => DateFormat::Iso,
            "dayfirst" | "day-first" | "dmy" => DateFormat::DayFirst,
            _ => DateFormat::Custom(s.to_string()),
        })
    }
}

pub fn to_calendar_day(d: NaiveDate) -> CalendarDay {
    CalendarDay(d.num_days_from_ce())
}

pub fn from_calendar_day(d: CalendarDay) -> Option<NaiveDate> {
    NaiveDate::from_num_days_from_ce_opt(d.0)
}

fn malformed(line: Option<u64>, reason: impl Into<String>) -> IngestError {
    IngestError::MalformedCsv {
        line,
        reason: reason.into(),
    }
}

fn from_csv(e: csv::Error) -> IngestError {
    let line = e.position().map(|p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => IngestError::Io(io),
        kind => malformed(line, format!("{kind:?}")),
    }
}

fn find_column(headers: &csv::StringRecord, name: &str) -> Result<usize, IngestError> {
    headers
        .iter()
        .position(|h| {
            h.trim()
                .trim_start_matches('\u{feff}')
                .eq_ignore_ascii_case(name)
        })
        .ok_or_else(|| malformed(Some(1), format!("no `{name}` column in header")))
}

/// Reads a price series from CSV.
pub fn load_prices<R: Read>(source: R, format: &DateFormat) -> Result<PriceSeries, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = reader.headers().map_err(from_csv)?.clone();
    if headers.is_empty() || headers.iter().all(str::is_empty) {
        return Err(malformed(Some(1), "missing header row"));
    }
    let date_col = find_column(&headers, "date")?;
    let close_col = find_column(&headers, "close")?;

    let mut rows: Vec<(NaiveDate, f64)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(from_csv)?;
        let line = record.position().map_or(0, |p| p.line());
        let date_raw = record
            .get(date_col)
            .ok_or_else(|| malformed(Some(line), "missing date cell"))?;
        let date = format
            .parse_date(date_raw)
            .ok_or_else(|| malformed(Some(line), format!("unparseable date `{date_raw}`")))?;
        let price_raw = record.get(close_col).unwrap_or("");
        if price_raw.is_empty() {
            return Err(malformed(Some(line), "missing close price"));
        }
        let price: f64 = price_raw
            .parse()
            .map_err(|_| malformed(Some(line), format!("non-numeric close price `{price_raw}`")))?;
        if !(price.is_finite() && price > 0.0) {
            return Err(IngestError::NonPositivePrice { line, value: price });
        }
        rows.push((date, price));
    }
    if rows.len() < 2 {
        return Err(IngestError::TooShort { rows: rows.len() });
    }
    rows.sort_by_key(|(d, _)| *d);
    if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(IngestError::DuplicateDate { date: w[0].0 });
    }
    let dates = rows.iter().map(|(d, _)| to_calendar_day(*d)).collect();
    let prices = rows.iter().map(|(_, p)| *p).collect();
    PriceSeries::new(prices, Some(dates)).map_err(|e| malformed(None, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(s: &str) -> Result<PriceSeries, IngestError> {
        load_prices(s.as_bytes(), &DateFormat::Iso)
    }

    #[test]
    fn minimal_file() {
        let p = load("date,close\n2000-09-20,100\n2000-09-21,110\n").unwrap();
        assert_eq!(p.prices(), &[100.0, 110.0]);
        let d = from_calendar_day(p.dates().unwrap()[1]).unwrap();
        assert_eq!(d, NaiveDate::from_ymd_opt(2000, 9, 21).unwrap());
    }

    #[test]
    fn header_is_case_insensitive_and_extra_columns_ignored() {
        let p = load("Open,CLOSE,Volume,Date\n1,100,5,2001-01-02\n1,101.5,5,2001-01-03\n").unwrap();
        assert_eq!(p.prices(), &[100.0, 101.5]);
    }

    #[test]
    fn rows_are_sorted() {
        let a = load("date,close\n2000-01-03,1\n2000-01-04,2\n2000-01-05,3\n").unwrap();
        let b = load("date,close\n2000-01-05,3\n2000-01-03,1\n2000-01-04,2\n").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            load("date,close\n2000-01-03,0\n2000-01-04,2\n"),
            Err(IngestError::NonPositivePrice { line: 2, .. })
        ));
        assert!(matches!(
            load("date,close\n2000-01-03,-4\n2000-01-04,2\n"),
            Err(IngestError::NonPositivePrice { .. })
        ));
        assert!(matches!(
            load("date,close\n2000-01-03,abc\n2000-01-04,2\n"),
            Err(IngestError::MalformedCsv { line: Some(2), .. })
        ));
        assert!(matches!(
            load("date,close\n2000-01-03,\n2000-01-04,2\n"),
            Err(IngestError::MalformedCsv { .. })
        ));
        assert!(matches!(
            load("date,close\n2000-01-03,1\n2000-01-03,2\n"),
            Err(IngestError::DuplicateDate { .. })
        ));
        assert!(matches!(
            load("date,close\n2000-01-03,1\n"),
            Err(IngestError::TooShort { rows: 1 })
        ));
        assert!(matches!(load(""), Err(IngestError::MalformedCsv { .. })));
        assert!(matches!(
            load("day,price\n2000-01-03,1\n"),
            Err(IngestError::MalformedCsv { line: Some(1), .. })
        ));
        assert!(matches!(
            load("date,close\n03/01/2000,1\n04/01/2000,2\n"),
            Err(IngestError::MalformedCsv { .. })
        ));
        let bad_utf8: &[u8] = b"date,close\n2000-01-03,\xff\n";
        assert!(matches!(
            load_prices(bad_utf8, &DateFormat::Iso),
            Err(IngestError::MalformedCsv { .. })
        ));
    }

    #[test]
    fn day_first_dates() {
        let p = load_prices(
            "date,close\n03/01/2000,1\n04-01-2000,2\n".as_bytes(),
            &DateFormat::DayFirst,
        )
        .unwrap();
        let d = from_calendar_day(p.dates().unwrap()[0]).unwrap();
        assert_eq!(d, NaiveDate::from_ymd_opt(2000, 1, 3).unwrap());
        let custom: DateFormat = "%Y%m%d".parse().unwrap();
        let p = load_prices("date,close\n20000103,1\n20000104,2\n".as_bytes(), &custom).unwrap();
        assert_eq!(p.len(), 2);
    }
}
