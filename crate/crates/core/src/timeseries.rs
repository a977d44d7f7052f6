//! Price and return series on a dense trading-day index.
//!
//! Trading days are numbered `0..m` in the order they appear; calendar
//! gaps (weekends, holidays) have no effect on any of the downstream math.

use alloc::vec::Vec;
use core::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// A calendar date stored as the number of days since 0001-01-01 (day 1).
///
/// The core never does calendar arithmetic; the value only orders rows and
/// travels with the data so output files can print it back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CalendarDay(pub i32);

/// Ordered daily closing prices.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    dates: Option<Vec<CalendarDay>>,
    prices: Vec<f64>,
}

impl PriceSeries {
    /// Builds a series after checking that every price is finite and
    /// positive, that dates (when given) strictly increase, and that there
    /// are at least two observations.
    pub fn new(prices: Vec<f64>, dates: Option<Vec<CalendarDay>>) -> Result<Self> {
        if prices.len() < 2 {
            return Err(Error::TooShort {
                len: prices.len(),
                required: 2,
            });
        }
        if let Some((index, &value)) = prices
            .iter()
            .enumerate()
            .find(|(_, p)| !(p.is_finite() && **p > 0.0))
        {
            return Err(Error::NonPositivePrice { index, value });
        }
        if let Some(d) = &dates {
            if d.len() != prices.len() {
                return Err(Error::DateCountMismatch {
                    dates: d.len(),
                    prices: prices.len(),
                });
            }
            if let Some(i) = d.windows(2).position(|w| w[0] >= w[1]) {
                return Err(Error::UnorderedDates { index: i + 1 });
            }
        }
        Ok(Self { dates, prices })
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn dates(&self) -> Option<&[CalendarDay]> {
        self.dates.as_deref()
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    /// Attaches (or replaces) the calendar dates.
    pub fn with_dates(self, dates: Vec<CalendarDay>) -> Result<Self> {
        Self::new(self.prices, Some(dates))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ReturnKind {
    /// `(p_t - p_{t-1}) / p_{t-1}`
    #[default]
    Simple,
    /// `ln(p_t / p_{t-1})`
    Log,
}

impl ReturnKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ReturnKind::Simple => "simple",
            ReturnKind::Log => "log",
        }
    }
}

impl fmt::Display for ReturnKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Daily returns. The value at position `k` belongs to trading day
/// `first_index + k`; series derived from prices start at day 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    first_index: usize,
    values: Vec<f64>,
    kind: ReturnKind,
    dates: Option<Vec<CalendarDay>>,
}

impl ReturnSeries {
    /// Wraps raw return values as if they had been derived from a price
    /// series, i.e. the first value sits on trading day 1.
    pub fn from_values(values: Vec<f64>, kind: ReturnKind) -> Self {
        Self {
            first_index: 1,
            values,
            kind,
            dates: None,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> ReturnKind {
        self.kind
    }

    pub fn first_index(&self) -> usize {
        self.first_index
    }

    pub fn dates(&self) -> Option<&[CalendarDay]> {
        self.dates.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Trading-day ordinals carried by the values.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.values.len()).map(move |k| self.first_index + k)
    }

    /// Number of trading days spanned by the underlying price window,
    /// counting day 0. For returns derived from `m` prices this is `m`.
    pub fn span_days(&self) -> usize {
        self.first_index + self.values.len()
    }

    /// The same series with every return multiplied by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            values: self.values.iter().map(|r| alpha * r).collect(),
            ..self.clone()
        }
    }
}

fn check_len(p: &PriceSeries) -> Result<()> {
    if p.len() < 2 {
        return Err(Error::TooShort {
            len: p.len(),
            required: 2,
        });
    }
    Ok(())
}

fn derive_returns(
    p: &PriceSeries,
    kind: ReturnKind,
    f: impl Fn(f64, f64) -> f64,
) -> Result<ReturnSeries> {
    check_len(p)?;
    let values = p.prices.windows(2).map(|w| f(w[0], w[1])).collect();
    Ok(ReturnSeries {
        first_index: 1,
        values,
        kind,
        dates: p.dates.as_ref().map(|d| d[1..].to_vec()),
    })
}

pub fn simple_returns(p: &PriceSeries) -> Result<ReturnSeries> {
    derive_returns(p, ReturnKind::Simple, |prev, cur| (cur - prev) / prev)
}

pub fn log_returns(p: &PriceSeries) -> Result<ReturnSeries> {
    derive_returns(p, ReturnKind::Log, |prev, cur| libm::log(cur / prev))
}

pub fn returns(p: &PriceSeries, kind: ReturnKind) -> Result<ReturnSeries> {
    match kind {
        ReturnKind::Simple => simple_returns(p),
        ReturnKind::Log => log_returns(p),
    }
}

/// Parameters of a seeded geometric Brownian motion with piecewise-constant
/// volatility.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    /// Drift per day.
    pub drift: f64,
    /// Volatility per day, used until the first regime starts.
    pub vol: f64,
    pub initial_price: f64,
    pub length: usize,
    pub seed: u64,
    /// `(start day, vol)` pairs; each regime lasts until the next one.
    pub regimes: Vec<(usize, f64)>,
}

impl SynthSpec {
    pub fn new(length: usize, seed: u64) -> Self {
        Self {
            drift: 0.0,
            vol: 0.01,
            initial_price: 100.0,
            length,
            seed,
            regimes: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.drift.is_finite() {
            return Err(Error::InvalidSpec("drift must be finite"));
        }
        if !(self.vol.is_finite() && self.vol >= 0.0) {
            return Err(Error::InvalidSpec("vol must be finite and nonnegative"));
        }
        if !(self.initial_price.is_finite() && self.initial_price > 0.0) {
            return Err(Error::InvalidSpec("initial price must be positive"));
        }
        if self.length < 2 {
            return Err(Error::InvalidSpec("length must be at least 2"));
        }
        if self.regimes.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidSpec(
                "regime starts must be strictly increasing",
            ));
        }
        for &(start, vol) in &self.regimes {
            if start >= self.length {
                return Err(Error::InvalidSpec("regime start beyond series length"));
            }
            if !(vol.is_finite() && vol >= 0.0) {
                return Err(Error::InvalidSpec(
                    "regime vol must be finite and nonnegative",
                ));
            }
        }
        Ok(())
    }

    /// Volatility in effect on trading day `day`.
    pub fn vol_at(&self, day: usize) -> f64 {
        self.regimes
            .iter()
            .rev()
            .find(|(start, _)| *start <= day)
            .map_or(self.vol, |&(_, v)| v)
    }
}

/// Generates a price path by accumulating log increments
/// `(drift - vol^2/2) + vol * z` and exponentiating, so prices stay positive
/// and a zero-noise, zero-drift spec reproduces the initial price exactly.
pub fn synth_prices(spec: &SynthSpec) -> Result<PriceSeries> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut log_level = 0.0_f64;
    let mut prices = Vec::with_capacity(spec.length);
    prices.push(spec.initial_price);
    for day in 1..spec.length {
        let vol = spec.vol_at(day);
        let z: f64 = StandardNormal.sample(&mut rng);
        log_level += (spec.drift - 0.5 * vol * vol) + vol * z;
        prices.push(spec.initial_price * libm::exp(log_level));
    }
    PriceSeries::new(prices, None)
}
