//! Comparison of fuzzy-transform and standard-deviation volatility.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ftransform::Normalization;
use crate::partition::Shape;
use crate::timeseries::ReturnSeries;
use crate::volatility::{
    annualize, ft_volatility, rolling_mean, std_volatility, Estimator, FtVolDecomposition,
    VolatilitySeries, TRADING_DAYS_PER_YEAR,
};

/// Days on which both series are defined, with the paired values.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AlignedPairs {
    pub indices: Vec<usize>,
    pub ft: Vec<f64>,
    pub std: Vec<f64>,
    pub lag: i64,
}

impl AlignedPairs {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Pairs `ft` on day `t` with `std` on day `t - lag`, keeping days where both
/// are defined. Pairs are indexed by the `ft` day.
pub fn align(ft: &VolatilitySeries, std: &VolatilitySeries, lag: i64) -> Result<AlignedPairs> {
    let mut pairs = AlignedPairs {
        lag,
        ..Default::default()
    };
    for (t, x) in ft.defined() {
        let shifted = t as i64 - lag;
        if shifted < 0 {
            continue;
        }
        if let Some(y) = std.get(shifted as usize) {
            pairs.indices.push(t);
            pairs.ft.push(x);
            pairs.std.push(y);
        }
    }
    if pairs.is_empty() {
        return Err(Error::NoOverlap);
    }
    Ok(pairs)
}

/// Product-moment correlation of two equally long samples.
pub fn pearson_xy(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            times: x.len(),
            values: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooFewPairs(x.len()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(Error::DegenerateVariance);
    }
    Ok((sxy / (libm::sqrt(sxx) * libm::sqrt(syy))).clamp(-1.0, 1.0))
}

pub fn pearson(pairs: &AlignedPairs) -> Result<f64> {
    pearson_xy(&pairs.ft, &pairs.std)
}

/// A named look-back horizon in trading days.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Horizon {
    pub name: String,
    pub days: usize,
}

impl Horizon {
    pub fn new(name: impl Into<String>, days: usize) -> Self {
        Self {
            name: name.into(),
            days,
        }
    }

    /// Yearly (252), monthly (21) and weekly (5).
    pub fn defaults() -> Vec<Horizon> {
        alloc::vec![
            Horizon::new("yearly", 252),
            Horizon::new("monthly", 21),
            Horizon::new("weekly", 5),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareOptions {
    pub normalization: Normalization,
    pub centered: bool,
    pub estimator: Estimator,
    pub lag: i64,
    /// Scale both series by `sqrt(252)` before reporting. Correlations are
    /// unaffected.
    pub annualize: bool,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            normalization: Normalization::Exact,
            centered: true,
            estimator: Estimator::Population,
            lag: 0,
            annualize: false,
        }
    }
}

/// Summary line for one horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct HorizonRecord {
    pub name: String,
    pub horizon: usize,
    pub nodes: usize,
    pub pairs: usize,
    /// `None` when the correlation is undefined; see `pearson_error`.
    pub pearson: Option<f64>,
    pub pearson_error: Option<Error>,
    pub mean_ft: Option<f64>,
    pub mean_std: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComparisonReport {
    pub horizons: Vec<HorizonRecord>,
}

/// Full per-horizon output of [`compare`].
#[derive(Debug, Clone, PartialEq)]
pub struct HorizonComparison {
    pub record: HorizonRecord,
    pub decomposition: FtVolDecomposition,
    /// FT deviation over the return index, annualized if requested.
    pub ft: VolatilitySeries,
    /// Rolling standard deviation, annualized if requested.
    pub std: VolatilitySeries,
    pub pairs: AlignedPairs,
    /// `r_t - b_t` where the baseline is defined.
    pub baseline_adjusted: Vec<Option<f64>>,
    /// `r_t - mu_t` with `mu_t` the mean of the STD window.
    pub mean_adjusted: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub report: ComparisonReport,
    pub details: Vec<HorizonComparison>,
}

fn mean(x: &[f64]) -> Option<f64> {
    (!x.is_empty()).then(|| x.iter().sum::<f64>() / x.len() as f64)
}

/// Runs both estimators for one horizon and correlates them.
pub fn compare_horizon(
    r: &ReturnSeries,
    horizon: &Horizon,
    shape: Shape,
    options: &CompareOptions,
) -> Result<HorizonComparison> {
    let decomposition = ft_volatility(r, horizon.days, shape, options.normalization)?;
    let mut ft = decomposition.to_series();
    let mut std = std_volatility(r, horizon.days, options.centered, options.estimator)?;
    if options.annualize {
        ft = annualize(&ft, TRADING_DAYS_PER_YEAR)?;
        std = annualize(&std, TRADING_DAYS_PER_YEAR)?;
    }
    let pairs = align(&ft, &std, options.lag)?;
    let (pearson, pearson_error) = match pearson(&pairs) {
        Ok(v) => (Some(v), None),
        Err(e @ (Error::DegenerateVariance | Error::TooFewPairs(_))) => (None, Some(e)),
        Err(e) => return Err(e),
    };
    let record = HorizonRecord {
        name: horizon.name.clone(),
        horizon: horizon.days,
        nodes: decomposition.node_count(),
        pairs: pairs.len(),
        pearson,
        pearson_error,
        mean_ft: mean(&pairs.ft),
        mean_std: mean(&pairs.std),
    };
    let baseline_adjusted = r
        .indices()
        .zip(r.values())
        .map(|(t, x)| decomposition.baseline_at(t).map(|b| x - b))
        .collect();
    let mean_adjusted = rolling_mean(r, horizon.days, options.centered)?
        .into_iter()
        .zip(r.values())
        .map(|(m, x)| m.map(|m| x - m))
        .collect();
    Ok(HorizonComparison {
        record,
        decomposition,
        ft,
        std,
        pairs,
        baseline_adjusted,
        mean_adjusted,
    })
}

/// Compares the two estimators at every horizon, independently.
pub fn compare(
    r: &ReturnSeries,
    horizons: &[Horizon],
    shape: Shape,
    options: &CompareOptions,
) -> Result<Comparison> {
    if horizons.is_empty() {
        return Err(Error::BadArgument("at least one horizon is required"));
    }
    let details = horizons
        .iter()
        .map(|h| compare_horizon(r, h, shape, options))
        .collect::<Result<Vec<_>>>()?;
    let report = ComparisonReport {
        horizons: details.iter().map(|d| d.record.clone()).collect(),
    };
    Ok(Comparison { report, details })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timeseries::{simple_returns, synth_prices, ReturnKind, SynthSpec};
    use crate::volatility::Method;
    use alloc::vec;

    fn vs(first: usize, v: &[Option<f64>], method: Method) -> VolatilitySeries {
        VolatilitySeries::new(first, v.to_vec(), method, 3)
    }

    #[test]
    fn align_identical_masks() {
        let a = vs(1, &[Some(1.0), Some(2.0), Some(3.0)], Method::Ft);
        let b = vs(1, &[Some(4.0), Some(5.0), Some(6.0)], Method::Std);
        let p = align(&a, &b, 0).unwrap();
        assert_eq!(p.indices, vec![1, 2, 3]);
        assert_eq!(p.std, vec![4.0, 5.0, 6.0]);
    }

    #[test]
    fn align_drops_undefined_edges() {
        let a = vs(1, &[Some(1.0); 6], Method::Ft);
        let b = vs(
            1,
            &[None, Some(5.0), Some(6.0), Some(7.0), Some(8.0), None],
            Method::Std,
        );
        let p = align(&a, &b, 0).unwrap();
        assert_eq!(p.indices, vec![2, 3, 4, 5]);
    }

    #[test]
    fn align_with_lag() {
        // ft on days 1..=8, std value on day s is 10 * s
        let a = vs(
            1,
            &(1..=8).map(|t| Some(t as f64)).collect::<Vec<_>>(),
            Method::Ft,
        );
        let b = vs(
            1,
            &(1..=8).map(|s| Some(10.0 * s as f64)).collect::<Vec<_>>(),
            Method::Std,
        );
        let p = align(&a, &b, 3).unwrap();
        assert_eq!(p.indices, vec![4, 5, 6, 7, 8]);
        assert_eq!(p.ft, vec![4.0, 5.0, 6.0, 7.0, 8.0]);
        assert_eq!(p.std, vec![10.0, 20.0, 30.0, 40.0, 50.0]);
        let p = align(&a, &b, -2).unwrap();
        assert_eq!(p.indices, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(p.std[0], 30.0);
        let none = vs(1, &[None; 8], Method::Std);
        assert_eq!(align(&a, &none, 0), Err(Error::NoOverlap));
    }

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert!((pearson_xy(&x, &y).unwrap() - 1.0).abs() < 1e-15);
        let y: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson_xy(&x, &y).unwrap() + 1.0).abs() < 1e-15);
        // by hand: means 3 and 3, sxy = 8, sxx = syy = 10
        let y = [2.0, 1.0, 4.0, 3.0, 5.0];
        assert!((pearson_xy(&x, &y).unwrap() - 0.8).abs() < 1e-15);
        assert_eq!(pearson_xy(&[1.0], &[1.0]), Err(Error::TooFewPairs(1)));
        assert_eq!(
            pearson_xy(&[1.0, 1.0], &[1.0, 2.0]),
            Err(Error::DegenerateVariance)
        );
    }

    #[test]
    fn constant_prices_report_degenerate_correlation() {
        let spec = SynthSpec {
            vol: 0.0,
            ..SynthSpec::new(600, 3)
        };
        let r = simple_returns(&synth_prices(&spec).unwrap()).unwrap();
        let c = compare(
            &r,
            &Horizon::defaults()[1..],
            Shape::Hat,
            &CompareOptions::default(),
        )
        .unwrap();
        for d in &c.details {
            assert!(d.ft.defined().all(|(_, v)| v == 0.0));
            assert!(d.std.defined().all(|(_, v)| v == 0.0));
            assert_eq!(d.record.pearson, None);
            assert_eq!(d.record.pearson_error, Some(Error::DegenerateVariance));
        }
    }

    #[test]
    fn compare_records_nodes_and_adjusted_returns() {
        let r = ReturnSeries::from_values(
            (0..4039)
                .map(|k| 0.01 * libm::sin(k as f64 * 0.7))
                .collect(),
            ReturnKind::Simple,
        );
        let c = compare(
            &r,
            &Horizon::defaults(),
            Shape::Hat,
            &CompareOptions::default(),
        )
        .unwrap();
        let nodes: Vec<usize> = c.report.horizons.iter().map(|h| h.nodes).collect();
        assert_eq!(nodes, vec![16, 192, 808]);
        let weekly = &c.details[2];
        assert_eq!(weekly.baseline_adjusted.len(), r.len());
        let k = 10;
        let b = weekly.decomposition.baseline_at(k + 1).unwrap();
        assert_eq!(weekly.baseline_adjusted[k], Some(r.values()[k] - b));
        assert!(weekly.mean_adjusted[0].is_none());
        assert!(weekly.mean_adjusted[2].is_some());
    }

    #[test]
    fn annualized_compare_keeps_correlation() {
        let spec = SynthSpec {
            regimes: vec![(0, 0.01), (300, 0.02), (600, 0.005)],
            ..SynthSpec::new(900, 11)
        };
        let r = simple_returns(&synth_prices(&spec).unwrap()).unwrap();
        let hs = [Horizon::new("monthly", 21)];
        let raw = compare(&r, &hs, Shape::Hat, &CompareOptions::default()).unwrap();
        let ann = compare(
            &r,
            &hs,
            Shape::Hat,
            &CompareOptions {
                annualize: true,
                ..Default::default()
            },
        )
        .unwrap();
        let (a, b) = (
            raw.report.horizons[0].clone(),
            ann.report.horizons[0].clone(),
        );
        assert!((a.pearson.unwrap() - b.pearson.unwrap()).abs() < 1e-12);
        let ratio = b.mean_ft.unwrap() / a.mean_ft.unwrap();
        assert!((ratio - libm::sqrt(252.0)).abs() < 1e-9);
    }
}
