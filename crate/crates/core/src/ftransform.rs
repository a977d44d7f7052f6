//! Direct and inverse fuzzy transforms.
//!
//! The discrete component for node `i` is the membership-weighted mean
//!
//! ```text
//! F_i = sum_j f(t_j) A_i(t_j) / sum_j A_i(t_j)
//! ```
//!
//! which is the minimizer of `sum_j (f(t_j) - c)^2 A_i(t_j)` over `c`.
//! [`Normalization::Paper`] replaces the denominator by the node spacing
//! `T`. On an integer grid with integer `T` the two coincide at every
//! interior node and differ only at the two truncated boundary nodes.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::partition::FuzzyPartition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Normalization {
    /// Divide by the total membership mass of the node.
    #[default]
    Exact,
    /// Divide by the spacing `T`.
    Paper,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::Exact => "exact",
            Normalization::Paper => "paper",
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Components of a transform, bound to the partition that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct FTransform {
    components: Vec<f64>,
    denominators: Vec<f64>,
    partition: FuzzyPartition,
    normalization: Normalization,
}

impl FTransform {
    /// Wraps externally computed components; the denominators are set to
    /// the spacing.
    pub fn from_components(
        components: Vec<f64>,
        partition: FuzzyPartition,
        normalization: Normalization,
    ) -> Result<Self> {
        if components.len() != partition.len() {
            return Err(Error::BadArgument(
                "component count differs from partition node count",
            ));
        }
        let denominators = vec![partition.spacing(); components.len()];
        Ok(Self {
            components,
            denominators,
            partition,
            normalization,
        })
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    /// The divisor used for each component.
    pub fn denominators(&self) -> &[f64] {
        &self.denominators
    }

    pub fn partition(&self) -> &FuzzyPartition {
        &self.partition
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// `sum_i F_i A_i(x)`.
    pub fn inverse_at(&self, x: f64) -> Result<f64> {
        Ok(self
            .partition
            .active(x)?
            .iter()
            .map(|(i, w)| self.components[i] * w)
            .sum())
    }

    /// Inverse transform evaluated at each point.
    pub fn inverse(&self, points: &[f64]) -> Result<Vec<f64>> {
        points.iter().map(|&x| self.inverse_at(x)).collect()
    }
}

fn check_lengths(times: &[f64], values: &[f64]) -> Result<()> {
    if times.len() != values.len() {
        return Err(Error::LengthMismatch {
            times: times.len(),
            values: values.len(),
        });
    }
    Ok(())
}

/// Discrete direct transform of the samples `(times[j], values[j])`.
pub fn direct_discrete(
    times: &[f64],
    values: &[f64],
    partition: &FuzzyPartition,
    normalization: Normalization,
) -> Result<FTransform> {
    check_lengths(times, values)?;
    let n = partition.len();
    let mut weighted = vec![0.0; n];
    let mut mass = vec![0.0; n];
    for (&t, &f) in times.iter().zip(values) {
        for (i, w) in partition.active(t)?.iter() {
            weighted[i] += f * w;
            mass[i] += w;
        }
    }
    if let Some(node) = mass.iter().position(|&m| m <= 0.0) {
        return Err(Error::EmptySupport { node });
    }
    let denominators = match normalization {
        Normalization::Exact => mass,
        Normalization::Paper => vec![partition.spacing(); n],
    };
    let components = weighted
        .iter()
        .zip(&denominators)
        .map(|(s, d)| s / d)
        .collect();
    Ok(FTransform {
        components,
        denominators,
        partition: *partition,
        normalization,
    })
}

/// Discrete inverse transform at `points`.
pub fn inverse_discrete(ft: &FTransform, points: &[f64]) -> Result<Vec<f64>> {
    ft.inverse(points)
}

/// `sum_j (values[j] - c)^2 A_i(times[j])`.
pub fn error_functional(
    times: &[f64],
    values: &[f64],
    partition: &FuzzyPartition,
    node: usize,
    c: f64,
) -> Result<f64> {
    check_lengths(times, values)?;
    let mut total = 0.0;
    for (&t, &f) in times.iter().zip(values) {
        let w = partition.membership(node, t)?;
        total += (f - c) * (f - c) * w;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum QuadratureRule {
    Trapezoid,
    #[default]
    Simpson,
}

/// Composite quadrature applied separately on each inter-node interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quadrature {
    pub rule: QuadratureRule,
    /// Subintervals per inter-node interval. Simpson needs an even count.
    pub points_per_interval: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            rule: QuadratureRule::Simpson,
            points_per_interval: 64,
        }
    }
}

impl Quadrature {
    fn validate(&self) -> Result<()> {
        if self.points_per_interval < 2 {
            return Err(Error::BadQuadratureSpec(
                "at least 2 points per interval are required",
            ));
        }
        if self.rule == QuadratureRule::Simpson && !self.points_per_interval.is_multiple_of(2) {
            return Err(Error::BadQuadratureSpec(
                "Simpson's rule needs an even number of subintervals",
            ));
        }
        Ok(())
    }

    fn integrate(&self, g: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let n = self.points_per_interval;
        let h = (b - a) / n as f64;
        let x = |k: usize| if k == n { b } else { a + k as f64 * h };
        let ends = g(a) + g(b);
        match self.rule {
            QuadratureRule::Trapezoid => {
                let inner: f64 = (1..n).map(|k| g(x(k))).sum();
                h * (0.5 * ends + inner)
            }
            QuadratureRule::Simpson => {
                let odd: f64 = (1..n).step_by(2).map(|k| g(x(k))).sum();
                let even: f64 = (2..n).step_by(2).map(|k| g(x(k))).sum();
                h / 3.0 * (ends + 4.0 * odd + 2.0 * even)
            }
        }
    }
}

/// Continuous direct transform of `f` over the partition domain.
///
/// Each component is the ratio of `int f A_i` to `int A_i`, both computed
/// with the same rule over the one or two intervals making up the support.
pub fn direct_continuous(
    f: impl Fn(f64) -> f64,
    partition: &FuzzyPartition,
    quadrature: Quadrature,
) -> Result<FTransform> {
    quadrature.validate()?;
    let n = partition.len();
    let mut components = Vec::with_capacity(n);
    let mut denominators = Vec::with_capacity(n);
    for i in 0..n {
        let xi = partition.node(i);
        let weight = |x: f64| partition.shape().weight((x - xi) / partition.spacing());
        let mut num = 0.0;
        let mut den = 0.0;
        let mut add = |a: f64, b: f64| {
            num += quadrature.integrate(|x| f(x) * weight(x), a, b);
            den += quadrature.integrate(weight, a, b);
        };
        if i > 0 {
            add(partition.node(i - 1), xi);
        }
        if i + 1 < n {
            add(xi, partition.node(i + 1));
        }
        components.push(num / den);
        denominators.push(den);
    }
    Ok(FTransform {
        components,
        denominators,
        partition: *partition,
        normalization: Normalization::Exact,
    })
}
