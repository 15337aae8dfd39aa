//! Nature's problem: the revenue-minimizing value distribution with given
//! means, solved as a linear program over a product grid, together with an
//! enumeration oracle and the closed-form two-bidder worst cases.

mod breakpoints;
mod brute;
pub mod simplex;
mod worst_case;

use serde::{Deserialize, Serialize};

pub use breakpoints::{auction_grid, mechanism_grid};
pub use brute::{brute_force_min, BRUTE_FORCE_LIMIT};
pub use worst_case::{
    lsa2_dual_multipliers, reserve_boundary, type_three_candidates, wcdistr2_classify,
    wcdistr2_construct,
    WorstCaseType,
};

use crate::auction::{revenue_floor, Thresholds};
use crate::error::{Error, Result};
use crate::grid::ProductGrid;
use crate::instance::Instance;
use simplex::{solve_standard, LpOutcome};

/// A finite-support joint value distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDistribution {
    pub atoms: Vec<Vec<f64>>,
    pub probs: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(atoms: Vec<Vec<f64>>, probs: Vec<f64>, vmax: &[f64]) -> Result<Self> {
        if atoms.len() != probs.len() {
            return Err(Error::Domain("one probability per atom is required".into()));
        }
        if probs.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::Domain("probabilities must be nonnegative".into()));
        }
        if (probs.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain("probabilities must sum to one".into()));
        }
        for a in &atoms {
            if a.len() != vmax.len() || a.iter().zip(vmax).any(|(x, h)| !(*x >= 0.0 && x <= h)) {
                return Err(Error::Domain(format!("atom {a:?} lies outside the value box")));
            }
        }
        Ok(Self { atoms, probs })
    }

    pub fn mean(&self) -> Vec<f64> {
        let n = self.atoms.first().map_or(0, Vec::len);
        (0..n)
            .map(|i| self.atoms.iter().zip(&self.probs).map(|(a, p)| a[i] * p).sum())
            .collect()
    }

    pub fn expectation(&self, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        self.atoms.iter().zip(&self.probs).map(|(a, p)| p * f(a)).sum()
    }
}

/// Multipliers on the mean constraints (`lambda`) and the normalization
/// constraint (`lambda0`). `value = λ·m + λ₀` bounds the revenue guarantee
/// from below whenever `λ₀ ≤ t(v) − λ·v` on the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualCertificate {
    pub lambda: Vec<f64>,
    pub lambda0: f64,
    pub value: f64,
}

/// Revenue values on the nodes of a product grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RevenueTable {
    grid: ProductGrid,
    nodes: Vec<Vec<f64>>,
    values: Vec<f64>,
}

impl RevenueTable {
    pub fn from_fn(grid: ProductGrid, mut t: impl FnMut(&[f64]) -> f64) -> Self {
        let nodes: Vec<Vec<f64>> = grid.nodes().collect();
        let values = nodes.iter().map(|v| t(v)).collect();
        Self { grid, nodes, values }
    }

    /// The lower revenue envelope of a mechanism, which is what Nature
    /// effectively faces: ties and boundary profiles are resolved in her
    /// favour.
    pub fn floor_of<T: Thresholds + ?Sized>(mech: &T, grid: ProductGrid) -> Self {
        Self::from_fn(grid, |v| revenue_floor(mech, v))
    }

    pub fn grid(&self) -> &ProductGrid {
        &self.grid
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `min_v t(v) − λ·v` over the grid.
    pub fn offset(&self, lambda: &[f64]) -> f64 {
        self.nodes
            .iter()
            .zip(&self.values)
            .map(|(v, t)| t - dot(lambda, v))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Solution of Nature's problem on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    pub value: f64,
    pub distribution: DiscreteDistribution,
    pub certificate: DualCertificate,
}

/// Minimizes expected revenue over distributions on the grid nodes with
/// the instance's means.
pub fn worst_case_lp(table: &RevenueTable, instance: &Instance) -> Result<WorstCase> {
    let n = instance.n();
    let cols = table.nodes.len();
    let mut a = vec![vec![1.0; cols]];
    for i in 0..n {
        a.push(table.nodes.iter().map(|v| v[i]).collect());
    }
    let mut b = vec![1.0];
    b.extend_from_slice(instance.means());
    let sol = match solve_standard(&a, &b, &table.values) {
        LpOutcome::Optimal(s) => s,
        LpOutcome::Infeasible => return Err(Error::MomentInfeasible),
        LpOutcome::Unbounded => {
            return Err(Error::Numerical("revenue LP reported unbounded".into()))
        }
    };
    let mut atoms = Vec::new();
    let mut probs = Vec::new();
    for (v, &f) in table.nodes.iter().zip(&sol.x) {
        if f > 0.0 {
            atoms.push(v.clone());
            probs.push(f);
        }
    }
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    let lambda = sol.duals[1..].to_vec();
    let lambda0 = table.offset(&lambda);
    let value = dot(&lambda, instance.means()) + lambda0;
    Ok(WorstCase {
        value: sol.objective,
        distribution: DiscreteDistribution { atoms, probs },
        certificate: DualCertificate { lambda, lambda0, value },
    })
}

/// `λ·m + min_v (t(v) − λ·v)` over the grid.
pub fn dual_value(table: &RevenueTable, instance: &Instance, lambda: &[f64]) -> f64 {
    dot(lambda, instance.means()) + table.offset(lambda)
}

/// Revenue guarantee of a mechanism on the given grid.
pub fn guarantee_on<T: Thresholds + ?Sized>(
    mech: &T,
    grid: ProductGrid,
    instance: &Instance,
) -> Result<WorstCase> {
    worst_case_lp(&RevenueTable::floor_of(mech, grid), instance)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
