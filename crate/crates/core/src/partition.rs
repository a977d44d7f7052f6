//! Uniform fuzzy partitions of the time axis.
//!
//! A partition is a grid of equidistant nodes `x_0 < x_1 < ... < x_{n-1}`
//! with spacing `T`, together with one basic function per node. The basic
//! function `A_i` peaks at `x_i` with value 1 and vanishes outside
//! `(x_i - T, x_i + T)`; the first and last functions are truncated to the
//! domain `[x_0, x_{n-1}]`, where the whole family sums to one.
//!
//! Node indices are zero-based throughout the crate.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::error::{Error, Result};

/// Shape of the basic functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Shape {
    /// Triangular: `1 - |x - x_i| / T` on the support.
    #[default]
    Hat,
    /// Raised cosine: `(cos(pi (x - x_i) / T) + 1) / 2` on the support.
    ///
    /// Cosine is even, so the same expression serves both halves of the
    /// support: it is 0 at `x_i - T`, 1 at `x_i` and 0 again at `x_i + T`,
    /// and it is symmetric about the node.
    ZShaped,
}

impl Shape {
    /// Membership at normalized distance `u = |x - x_i| / T` from a node.
    #[inline]
    pub fn weight(self, u: f64) -> f64 {
        let u = libm::fabs(u);
        if u >= 1.0 {
            return 0.0;
        }
        match self {
            Shape::Hat => 1.0 - u,
            Shape::ZShaped => 0.5 * (libm::cos(PI * u) + 1.0),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Shape::Hat => "hat",
            Shape::ZShaped => "z",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The nonzero entries of a membership row: at most two adjacent nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Active {
    entries: [(usize, f64); 2],
    len: usize,
}

impl Active {
    fn push(&mut self, node: usize, weight: f64) {
        if weight > 0.0 {
            self.entries[self.len] = (node, weight);
            self.len += 1;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries[..self.len].iter().copied()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzyPartition {
    start: f64,
    spacing: f64,
    nodes: usize,
    shape: Shape,
}

impl FuzzyPartition {
    /// Places nodes at `start + k * spacing` for every `k` that keeps the
    /// node inside `[start, end]`, i.e. `floor((end - start) / spacing) + 1`
    /// nodes. The domain of the result ends at the last node, which may be
    /// short of `end`.
    pub fn build_uniform(start: f64, end: f64, spacing: f64, shape: Shape) -> Result<Self> {
        let width = end - start;
        if !(spacing.is_finite() && spacing > 0.0 && width.is_finite() && width >= spacing) {
            return Err(Error::BadSpacing { spacing, width });
        }
        // absorb representation error when the width is an exact multiple
        let steps = libm::floor(width / spacing * (1.0 + 4.0 * f64::EPSILON));
        Ok(Self {
            start,
            spacing,
            nodes: steps as usize + 1,
            shape,
        })
    }

    /// `nodes` equidistant nodes starting at `start`.
    pub fn with_node_count(start: f64, spacing: f64, nodes: usize, shape: Shape) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) || nodes < 2 {
            return Err(Error::BadSpacing {
                spacing,
                width: spacing * nodes.saturating_sub(1) as f64,
            });
        }
        Ok(Self {
            start,
            spacing,
            nodes,
            shape,
        })
    }

    /// Number of nodes a series covering `days` trading days receives at
    /// horizon `horizon`: one node every `horizon` days, anchored at the
    /// first day, `floor(days / horizon)` in total.
    pub fn node_count_for_days(days: usize, horizon: usize) -> usize {
        days.checked_div(horizon).unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.nodes
    }

    pub fn is_empty(&self) -> bool {
        self.nodes == 0
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn node(&self, i: usize) -> f64 {
        self.start + i as f64 * self.spacing
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.nodes).map(move |i| self.node(i))
    }

    /// Closed domain `[x_0, x_{n-1}]`.
    pub fn domain(&self) -> (f64, f64) {
        (self.start, self.node(self.nodes - 1))
    }

    pub fn contains(&self, x: f64) -> bool {
        let (a, b) = self.domain();
        x >= a && x <= b
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.nodes {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.nodes,
            });
        }
        Ok(())
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if !self.contains(x) {
            let (start, end) = self.domain();
            return Err(Error::OutOfDomain { x, start, end });
        }
        Ok(())
    }

    /// `A_i(x)`. Zero outside the node's support and outside the domain.
    pub fn membership(&self, i: usize, x: f64) -> Result<f64> {
        self.check_index(i)?;
        if !self.contains(x) {
            return Ok(0.0);
        }
        Ok(self.shape.weight((x - self.node(i)) / self.spacing))
    }

    /// Nonzero memberships at `x`.
    pub fn active(&self, x: f64) -> Result<Active> {
        self.check_domain(x)?;
        let cell = libm::floor((x - self.start) / self.spacing);
        let left = (cell.max(0.0) as usize).min(self.nodes - 2);
        let mut active = Active {
            entries: [(0, 0.0); 2],
            len: 0,
        };
        active.push(
            left,
            self.shape.weight((x - self.node(left)) / self.spacing),
        );
        active.push(
            left + 1,
            self.shape.weight((self.node(left + 1) - x) / self.spacing),
        );
        Ok(active)
    }

    /// All `n` memberships at `x`; at most two are nonzero.
    pub fn membership_row(&self, x: f64) -> Result<Vec<f64>> {
        let mut row = vec![0.0; self.nodes];
        for (i, w) in self.active(x)?.iter() {
            row[i] = w;
        }
        Ok(row)
    }

    /// `sum_j A_i(t_j)`.
    pub fn cardinality(&self, i: usize, samples: &[f64]) -> Result<f64> {
        self.check_index(i)?;
        let mut total = 0.0;
        for &t in samples {
            total += self.membership(i, t)?;
        }
        Ok(total)
    }

    /// `sum_i A_i(x)^2`, which lies in `(0, 1]` and equals 1 at nodes.
    pub fn lambda_sq(&self, x: f64) -> Result<f64> {
        Ok(self.active(x)?.iter().map(|(_, w)| w * w).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three(shape: Shape) -> FuzzyPartition {
        FuzzyPartition::build_uniform(0.0, 4.0, 2.0, shape).unwrap()
    }

    #[test]
    fn build_places_nodes() {
        let p = three(Shape::Hat);
        assert_eq!(p.nodes().collect::<Vec<_>>(), vec![0.0, 2.0, 4.0]);
        assert_eq!(p.domain(), (0.0, 4.0));

        let weekly = FuzzyPartition::build_uniform(0.0, 4039.0, 5.0, Shape::Hat).unwrap();
        assert_eq!(weekly.len(), 808);
        // 4039 / 252 = 16.03, so the node grid reaches 16 * 252 = 4032
        let yearly = FuzzyPartition::build_uniform(0.0, 4039.0, 252.0, Shape::Hat).unwrap();
        assert_eq!(yearly.len(), 17);
        assert_eq!(yearly.domain().1, 4032.0);

        let p = FuzzyPartition::build_uniform(0.0, 0.3, 0.1, Shape::Hat).unwrap();
        assert_eq!(p.len(), 4);
    }

    #[test]
    fn build_rejects_bad_spacing() {
        assert!(matches!(
            FuzzyPartition::build_uniform(0.0, 4.0, 0.0, Shape::Hat),
            Err(Error::BadSpacing { .. })
        ));
        assert!(matches!(
            FuzzyPartition::build_uniform(0.0, 4.0, -1.0, Shape::Hat),
            Err(Error::BadSpacing { .. })
        ));
        assert!(matches!(
            FuzzyPartition::build_uniform(0.0, 4.0, 5.0, Shape::Hat),
            Err(Error::BadSpacing { .. })
        ));
    }

    #[test]
    fn series_node_counts() {
        assert_eq!(FuzzyPartition::node_count_for_days(4040, 252), 16);
        assert_eq!(FuzzyPartition::node_count_for_days(4040, 21), 192);
        assert_eq!(FuzzyPartition::node_count_for_days(4040, 5), 808);
    }

    #[test]
    fn membership_examples() {
        let hat = three(Shape::Hat);
        let z = three(Shape::ZShaped);
        assert_eq!(hat.membership(1, 1.0).unwrap(), 0.5);
        assert!((z.membership(1, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(hat.membership(1, 2.0).unwrap(), 1.0);
        assert_eq!(hat.membership(1, 4.1).unwrap(), 0.0);
        assert_eq!(hat.membership(0, 2.0).unwrap(), 0.0);
        assert_eq!(z.membership(1, 0.0).unwrap(), 0.0);
        assert_eq!(z.membership(1, 4.0).unwrap(), 0.0);
        assert!(matches!(
            hat.membership(3, 1.0),
            Err(Error::IndexOutOfRange { index: 3, len: 3 })
        ));
    }

    #[test]
    fn membership_row_examples() {
        let hat = three(Shape::Hat);
        assert_eq!(hat.membership_row(2.0).unwrap(), vec![0.0, 1.0, 0.0]);
        assert_eq!(hat.membership_row(4.0).unwrap(), vec![0.0, 0.0, 1.0]);
        assert_eq!(hat.membership_row(0.5).unwrap(), vec![0.75, 0.25, 0.0]);
        assert!(matches!(
            hat.membership_row(4.5),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(hat.membership_row(-0.1).is_err());
    }

    #[test]
    fn cardinality_examples() {
        let p = FuzzyPartition::build_uniform(0.0, 8.0, 2.0, Shape::Hat).unwrap();
        let grid: Vec<f64> = (0..=8).map(f64::from).collect();
        // brute-force: 0.5 + 1 + 0.5
        assert_eq!(p.cardinality(2, &grid).unwrap(), 2.0);
        // boundary: 1 + 0.5 = T/2 + A(x_0)/2
        assert_eq!(p.cardinality(0, &grid).unwrap(), 1.5);
        assert_eq!(p.cardinality(4, &grid).unwrap(), 1.5);
        assert_eq!(p.cardinality(1, &[]).unwrap(), 0.0);
        assert!(p.cardinality(9, &grid).is_err());
    }

    #[test]
    fn interior_cardinality_equals_spacing() {
        for t in 1..=30usize {
            let p = FuzzyPartition::with_node_count(0.0, t as f64, 5, Shape::Hat).unwrap();
            let grid: Vec<f64> = (0..=4 * t).map(|k| k as f64).collect();
            for i in 1..4 {
                let c = p.cardinality(i, &grid).unwrap();
                assert!((c - t as f64).abs() < 1e-12 * t as f64, "T = {t}: {c}");
            }
        }
    }

    #[test]
    fn zshaped_cardinality_on_integer_grid() {
        // the cosine terms over a symmetric integer window sum to 1, which
        // makes the interior cardinality T up to rounding
        for t in 2..=30usize {
            let p = FuzzyPartition::with_node_count(0.0, t as f64, 3, Shape::ZShaped).unwrap();
            let grid: Vec<f64> = (0..=2 * t).map(|k| k as f64).collect();
            let c = p.cardinality(1, &grid).unwrap();
            assert!((c - t as f64).abs() < 1e-12, "T = {t}: {c}");
        }
    }

    #[test]
    fn lambda_sq_examples() {
        let hat = three(Shape::Hat);
        assert_eq!(hat.lambda_sq(2.0).unwrap(), 1.0);
        assert_eq!(hat.lambda_sq(0.0).unwrap(), 1.0);
        assert_eq!(hat.lambda_sq(1.0).unwrap(), 0.5);
        assert_eq!(hat.lambda_sq(3.0).unwrap(), 0.5);
        assert!(hat.lambda_sq(5.0).is_err());
    }

    #[test]
    fn symmetric_about_interior_nodes() {
        for shape in [Shape::Hat, Shape::ZShaped] {
            let p = FuzzyPartition::with_node_count(0.0, 7.0, 5, shape).unwrap();
            for i in 1..4 {
                for k in 0..=70 {
                    let d = k as f64 * 0.1;
                    let l = p.membership(i, p.node(i) - d).unwrap();
                    let r = p.membership(i, p.node(i) + d).unwrap();
                    assert!((l - r).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn monotone_on_each_half() {
        for shape in [Shape::Hat, Shape::ZShaped] {
            let p = FuzzyPartition::with_node_count(0.0, 3.0, 4, shape).unwrap();
            let xs: Vec<f64> = (0..=90).map(|k| k as f64 * 0.1).collect();
            for i in 0..4 {
                let xi = p.node(i);
                for w in xs.windows(2) {
                    let (a, b) = (
                        p.membership(i, w[0]).unwrap(),
                        p.membership(i, w[1]).unwrap(),
                    );
                    if w[1] <= xi {
                        assert!(a <= b);
                    } else if w[0] >= xi {
                        assert!(a >= b);
                    }
                }
            }
        }
    }
}
