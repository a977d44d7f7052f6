//! Volatility estimators.
//!
//! The fuzzy-transform measure works on a partition with one node every `T`
//! trading days. Transforming the returns gives components `B_i` and the
//! baseline `b_t = sum_i B_i A_i(t)`; transforming absolute returns gives
//! `H_i` and the envelope `h_t`. The deviation `d_t = h_t - b_t` is the
//! volatility. Since `|r| - r` is zero for nonnegative returns and `2|r|`
//! otherwise, only negative returns contribute to `d_t`.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::ftransform::{direct_discrete, FTransform, Normalization};
use crate::partition::{FuzzyPartition, Shape};
use crate::timeseries::ReturnSeries;

/// Trading days per year.
pub const TRADING_DAYS_PER_YEAR: f64 = 252.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Fuzzy-transform deviation.
    Ft,
    /// Rolling standard deviation.
    Std,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Ft => "ft",
            Method::Std => "std",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Estimator {
    /// Divide by `N`.
    #[default]
    Population,
    /// Divide by `N - 1`.
    Sample,
}

impl Estimator {
    pub fn as_str(self) -> &'static str {
        match self {
            Estimator::Population => "population",
            Estimator::Sample => "sample",
        }
    }
}

/// Per-day volatility on the trading-day index of a return series. Days
/// without a value (outside the node grid, or lacking a full window) are
/// `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct VolatilitySeries {
    first_index: usize,
    values: Vec<Option<f64>>,
    method: Method,
    horizon: usize,
    annualized: bool,
}

impl VolatilitySeries {
    pub fn new(
        first_index: usize,
        values: Vec<Option<f64>>,
        method: Method,
        horizon: usize,
    ) -> Self {
        Self {
            first_index,
            values,
            method,
            horizon,
            annualized: false,
        }
    }

    pub fn first_index(&self) -> usize {
        self.first_index
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn is_annualized(&self) -> bool {
        self.annualized
    }

    /// Value on trading day `index`, if defined.
    pub fn get(&self, index: usize) -> Option<f64> {
        index
            .checked_sub(self.first_index)
            .and_then(|k| self.values.get(k).copied().flatten())
    }

    /// `(index, value)` for every defined day.
    pub fn defined(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(move |(k, v)| v.map(|v| (self.first_index + k, v)))
    }

    pub fn defined_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    /// Mean of the defined values.
    pub fn mean(&self) -> Option<f64> {
        let (sum, n) = self
            .defined()
            .fold((0.0, 0usize), |(s, n), (_, v)| (s + v, n + 1));
        (n > 0).then(|| sum / n as f64)
    }
}

/// Scales every defined value by `sqrt(periods_per_year)`.
pub fn annualize(v: &VolatilitySeries, periods_per_year: f64) -> Result<VolatilitySeries> {
    if v.annualized {
        return Err(Error::AlreadyAnnualized);
    }
    if !(periods_per_year.is_finite() && periods_per_year > 0.0) {
        return Err(Error::BadArgument("periods per year must be positive"));
    }
    let factor = libm::sqrt(periods_per_year);
    Ok(VolatilitySeries {
        values: v.values.iter().map(|x| x.map(|x| x * factor)).collect(),
        annualized: true,
        ..v.clone()
    })
}

fn check_horizon(horizon: usize) -> Result<()> {
    if horizon < 2 {
        return Err(Error::BadHorizon(horizon));
    }
    Ok(())
}

/// The partition the fuzzy-transform estimator uses for `r` at horizon
/// `horizon`: `floor(span / horizon)` nodes, `horizon` days apart, the first
/// on the first return's day. Requires at least `2 * horizon + 1` returns.
pub fn series_partition(r: &ReturnSeries, horizon: usize, shape: Shape) -> Result<FuzzyPartition> {
    check_horizon(horizon)?;
    let required = 2 * horizon + 1;
    if r.len() < required {
        return Err(Error::SeriesTooShort {
            len: r.len(),
            horizon,
            required,
        });
    }
    let nodes = FuzzyPartition::node_count_for_days(r.span_days(), horizon);
    FuzzyPartition::with_node_count(r.first_index() as f64, horizon as f64, nodes, shape)
}

/// Everything the fuzzy-transform estimator computes for one horizon.
///
/// `baseline`, `envelope` and `deviation` cover the trading days from the
/// first to the last node, starting at [`FtVolDecomposition::first_index`].
#[derive(Debug, Clone, PartialEq)]
pub struct FtVolDecomposition {
    returns_first_index: usize,
    returns_len: usize,
    first_index: usize,
    b: FTransform,
    h: FTransform,
    baseline: Vec<f64>,
    envelope: Vec<f64>,
    deviation: Vec<f64>,
}

impl FtVolDecomposition {
    pub fn partition(&self) -> &FuzzyPartition {
        self.b.partition()
    }

    pub fn horizon(&self) -> usize {
        self.partition().spacing() as usize
    }

    pub fn node_count(&self) -> usize {
        self.partition().len()
    }

    /// Transform of the returns (`B_i`).
    pub fn returns_transform(&self) -> &FTransform {
        &self.b
    }

    /// Transform of the absolute returns (`H_i`).
    pub fn abs_returns_transform(&self) -> &FTransform {
        &self.h
    }

    pub fn first_index(&self) -> usize {
        self.first_index
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.deviation.len()).map(move |k| self.first_index + k)
    }

    /// `b_t`
    pub fn baseline(&self) -> &[f64] {
        &self.baseline
    }

    /// `h_t`
    pub fn envelope(&self) -> &[f64] {
        &self.envelope
    }

    /// `d_t = h_t - b_t`
    pub fn deviation(&self) -> &[f64] {
        &self.deviation
    }

    /// Baseline on trading day `index`, if it lies on the node grid.
    pub fn baseline_at(&self, index: usize) -> Option<f64> {
        index
            .checked_sub(self.first_index)
            .and_then(|k| self.baseline.get(k).copied())
    }

    /// The deviation laid out over the whole return index.
    pub fn to_series(&self) -> VolatilitySeries {
        let values = (0..self.returns_len)
            .map(|k| {
                (self.returns_first_index + k)
                    .checked_sub(self.first_index)
                    .and_then(|j| self.deviation.get(j).copied())
            })
            .collect();
        VolatilitySeries::new(self.returns_first_index, values, Method::Ft, self.horizon())
    }
}

/// Samples of `r` that fall on the partition domain.
fn domain_samples(r: &ReturnSeries, p: &FuzzyPartition) -> (usize, Vec<f64>, Vec<f64>) {
    let (start, end) = p.domain();
    let (first, last) = (start as usize, end as usize);
    let times = (first..=last).map(|t| t as f64).collect();
    let lo = first - r.first_index();
    let values = r.values()[lo..=lo + (last - first)].to_vec();
    (first, times, values)
}

/// Fuzzy-transform volatility of `r` at horizon `horizon`.
pub fn ft_volatility(
    r: &ReturnSeries,
    horizon: usize,
    shape: Shape,
    normalization: Normalization,
) -> Result<FtVolDecomposition> {
    let p = series_partition(r, horizon, shape)?;
    let (first_index, times, values) = domain_samples(r, &p);
    let abs: Vec<f64> = values.iter().map(|v| libm::fabs(*v)).collect();
    let b = direct_discrete(&times, &values, &p, normalization)?;
    let h = direct_discrete(&times, &abs, &p, normalization)?;
    let baseline = b.inverse(&times)?;
    let envelope = h.inverse(&times)?;
    let deviation = envelope.iter().zip(&baseline).map(|(h, b)| h - b).collect();
    Ok(FtVolDecomposition {
        returns_first_index: r.first_index(),
        returns_len: r.len(),
        first_index,
        b,
        h,
        baseline,
        envelope,
        deviation,
    })
}

/// Position range `[lo, hi]` of the window ending at (trailing) or centred
/// on position `k`, if it fits in `len` values.
fn window_bounds(k: usize, len: usize, window: usize, centered: bool) -> Option<(usize, usize)> {
    let (back, ahead) = if centered {
        (window / 2, window - window / 2 - 1)
    } else {
        (window - 1, 0)
    };
    let lo = k.checked_sub(back)?;
    let hi = k + ahead;
    (hi < len).then_some((lo, hi))
}

fn check_window(r: &ReturnSeries, window: usize) -> Result<()> {
    check_horizon(window)?;
    if r.len() < window {
        return Err(Error::SeriesTooShort {
            len: r.len(),
            horizon: window,
            required: window,
        });
    }
    Ok(())
}

fn rolling(
    r: &ReturnSeries,
    window: usize,
    centered: bool,
    stat: impl Fn(&[f64]) -> f64,
) -> Vec<Option<f64>> {
    let x = r.values();
    (0..x.len())
        .map(|k| window_bounds(k, x.len(), window, centered).map(|(lo, hi)| stat(&x[lo..=hi])))
        .collect()
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn std_dev(x: &[f64], estimator: Estimator) -> f64 {
    let mu = mean(x);
    let ss: f64 = x.iter().map(|v| (v - mu) * (v - mu)).sum();
    let dof = match estimator {
        Estimator::Population => x.len() as f64,
        Estimator::Sample => x.len() as f64 - 1.0,
    };
    libm::sqrt(ss / dof)
}

/// Rolling standard deviation of returns over `window` days.
///
/// A centred window at day `t` covers `[t - floor(T/2), t + ceil(T/2) - 1]`,
/// a trailing one `[t - T + 1, t]`. Days without a full window are undefined.
pub fn std_volatility(
    r: &ReturnSeries,
    window: usize,
    centered: bool,
    estimator: Estimator,
) -> Result<VolatilitySeries> {
    check_window(r, window)?;
    let values = rolling(r, window, centered, |w| std_dev(w, estimator));
    Ok(VolatilitySeries::new(
        r.first_index(),
        values,
        Method::Std,
        window,
    ))
}

/// Rolling mean over the same windows as [`std_volatility`].
pub fn rolling_mean(r: &ReturnSeries, window: usize, centered: bool) -> Result<Vec<Option<f64>>> {
    check_window(r, window)?;
    Ok(rolling(r, window, centered, mean))
}

/// `E[|r - mu|^theta]` with `mu` the arithmetic mean. `theta = 2` is the
/// population variance, `theta = 1` the mean absolute deviation.
pub fn theta_deviation(returns: &[f64], theta: f64) -> Result<f64> {
    if returns.is_empty() {
        return Err(Error::EmptySeries);
    }
    if !(theta.is_finite() && theta > 0.0) {
        return Err(Error::BadTheta(theta));
    }
    let mu = mean(returns);
    Ok(returns
        .iter()
        .map(|r| libm::pow(libm::fabs(r - mu), theta))
        .sum::<f64>()
        / returns.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LuceRiskParams {
    k_gain: f64,
    k_loss: f64,
    theta: f64,
}

impl LuceRiskParams {
    /// `k_gain` weighs positive returns, `k_loss` negative ones.
    pub fn new(k_gain: f64, k_loss: f64, theta: f64) -> Result<Self> {
        if !(k_gain.is_finite() && k_gain >= 0.0 && k_loss.is_finite() && k_loss >= 0.0) {
            return Err(Error::BadArgument("risk weights must be nonnegative"));
        }
        if !(theta.is_finite() && theta > 0.0) {
            return Err(Error::BadTheta(theta));
        }
        Ok(Self {
            k_gain,
            k_loss,
            theta,
        })
    }

    pub fn k_gain(&self) -> f64 {
        self.k_gain
    }

    pub fn k_loss(&self) -> f64 {
        self.k_loss
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Empirical Luce risk: the density in the integral form is replaced by the
/// sample frequency, giving
/// `(K1 sum_{r > 0} |r|^theta + K2 sum_{r < 0} |r|^theta) / q`.
pub fn luce_risk(returns: &[f64], params: LuceRiskParams) -> Result<f64> {
    if returns.is_empty() {
        return Err(Error::EmptySeries);
    }
    let (gain, loss) = returns.iter().fold((0.0, 0.0), |(g, l), &r| {
        let m = libm::pow(libm::fabs(r), params.theta);
        if r > 0.0 {
            (g + m, l)
        } else if r < 0.0 {
            (g, l + m)
        } else {
            (g, l)
        }
    });
    Ok((params.k_gain * gain + params.k_loss * loss) / returns.len() as f64)
}

/// Pointwise risk `U` that puts the deviation in Luce's additive form:
/// `2 q lambda_sq freq / T` for a negative return and 0 otherwise.
pub fn u_function(freq: f64, r: f64, q: usize, horizon: usize, lambda_sq: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&freq) {
        return Err(Error::BadArgument("frequency must lie in [0, 1]"));
    }
    if q == 0 {
        return Err(Error::BadArgument("sample count must be at least 1"));
    }
    if horizon == 0 {
        return Err(Error::BadArgument("horizon must be at least 1"));
    }
    if !(lambda_sq > 0.0 && lambda_sq <= 1.0) {
        return Err(Error::BadArgument("lambda squared must lie in (0, 1]"));
    }
    if !r.is_finite() {
        return Err(Error::BadArgument("return must be finite"));
    }
    if r >= 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * q as f64 * lambda_sq / horizon as f64 * freq)
}

/// Pointwise upper bound on the deviation, on the same days as
/// [`FtVolDecomposition::deviation`].
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationBound {
    pub first_index: usize,
    pub values: Vec<f64>,
}

/// `u_t = (2 / T) * sum |r_s|` over negative returns `r_s` on days `s` inside
/// the support of some node active at `t`. Bounds the deviation computed
/// with [`Normalization::Paper`].
pub fn deviation_upper_bound(
    r: &ReturnSeries,
    horizon: usize,
    shape: Shape,
) -> Result<DeviationBound> {
    deviation_upper_bound_with(r, horizon, shape, Normalization::Paper)
}

/// [`deviation_upper_bound`] for either normalization: `2 / T` becomes
/// `2 / D_t`, with `D_t` the smallest component divisor among the nodes
/// active at `t`. The bound rests on `sum_i A_i(s) A_i(t) <= 1`.
pub fn deviation_upper_bound_with(
    r: &ReturnSeries,
    horizon: usize,
    shape: Shape,
    normalization: Normalization,
) -> Result<DeviationBound> {
    let p = series_partition(r, horizon, shape)?;
    let (first_index, times, values) = domain_samples(r, &p);
    let divisors = match normalization {
        Normalization::Paper => alloc::vec![p.spacing(); p.len()],
        Normalization::Exact => {
            let ones = alloc::vec![1.0; times.len()];
            direct_discrete(&times, &ones, &p, Normalization::Exact)?
                .denominators()
                .to_vec()
        }
    };
    // prefix sums of negative mass for O(1) range queries
    let mut negative = Vec::with_capacity(values.len() + 1);
    negative.push(0.0);
    for v in &values {
        let last = *negative.last().unwrap_or(&0.0);
        negative.push(last + if *v < 0.0 { -v } else { 0.0 });
    }
    let spacing = horizon;
    let last_pos = values.len() - 1;
    let mut bound = Vec::with_capacity(values.len());
    for &t in &times {
        let active = p.active(t)?;
        let (mut lo_node, mut hi_node) = (usize::MAX, 0);
        let mut divisor = f64::INFINITY;
        for (i, _) in active.iter() {
            lo_node = lo_node.min(i);
            hi_node = hi_node.max(i);
            divisor = divisor.min(divisors[i]);
        }
        // open supports (x_i - T, x_i + T), as positions relative to the domain start
        let lo = (lo_node * spacing).saturating_sub(spacing - 1);
        let hi = (hi_node * spacing + spacing - 1).min(last_pos);
        bound.push(2.0 * (negative[hi + 1] - negative[lo]) / divisor);
    }
    Ok(DeviationBound {
        first_index,
        values: bound,
    })
}
