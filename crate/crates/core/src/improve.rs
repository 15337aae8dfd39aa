//! Turning any feasible mechanism into a corner-hitting linear score
//! auction whose revenue guarantee is at least as large.
//!
//! The pipeline takes Nature's dual multipliers `λ` for the mechanism,
//! removes bidders with negative multipliers, replaces every threshold by
//! its best affine minorant with slopes `λ_{-i}`, and places the reserves
//! of the new auction at the least fixed point of the minorant map.

use serde::{Deserialize, Serialize};

use crate::auction::{GridMechanism, LinearScoreAuction, Thresholds, NODE_TOL};
use crate::error::{Error, Result};
use crate::grid::ProductGrid;
use crate::instance::Instance;
use crate::linalg;
use crate::nature::simplex::{solve_standard, LpOutcome};
use crate::nature::{auction_grid, dual_value, guarantee_on, mechanism_grid, RevenueTable};

/// Multipliers below this count as negative.
const NEGATIVE_TOL: f64 = 1e-12;
const FIXED_POINT_TOL: f64 = 1e-12;
const MAX_ITERATIONS: usize = 1_000_000;
const MAX_REFINEMENTS: usize = 8;

/// Thresholds `p̃_i(v_{-i}) = max{λ_{-i}·v_{-i} + b_i, 0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineThresholds {
    b: Vec<f64>,
    lambda: Vec<f64>,
    vmax: Vec<f64>,
    /// Whether `{v in the box : v_i < λ_{-i}·v_{-i} + b_i ∀i}` is nonempty.
    no_sale_nonempty: bool,
}

impl AffineThresholds {
    pub fn new(b: Vec<f64>, lambda: Vec<f64>, vmax: Vec<f64>) -> Result<Self> {
        let n = vmax.len();
        if b.len() != n || lambda.len() != n {
            return Err(Error::Domain("intercepts and slopes need one entry per bidder".into()));
        }
        if lambda.iter().any(|&l| !(l >= 0.0 && l.is_finite())) {
            return Err(Error::Domain("slopes must be finite and nonnegative".into()));
        }
        let no_sale_nonempty = strict_region_nonempty(&b, &lambda, &vmax)?;
        Ok(Self { b, lambda, vmax, no_sale_nonempty })
    }

    pub fn intercepts(&self) -> &[f64] {
        &self.b
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// `λ_{-i}·v_{-i} + b_i` before the floor at zero.
    fn affine(&self, i: usize, v: &[f64]) -> f64 {
        self.b[i] + (0..v.len()).filter(|&j| j != i).map(|j| self.lambda[j] * v[j]).sum::<f64>()
    }
}

impl Thresholds for AffineThresholds {
    fn bidders(&self) -> usize {
        self.vmax.len()
    }

    fn vmax(&self) -> &[f64] {
        &self.vmax
    }

    fn threshold(&self, i: usize, v: &[f64]) -> f64 {
        self.affine(i, v).max(0.0)
    }

    /// The no-sale region is `{A(λ)v < b}` intersected with the box, a
    /// convex set; when nonempty its closure is `{A(λ)v ≤ b}`.
    fn no_sale_limit(&self, v: &[f64]) -> bool {
        self.no_sale_nonempty && (0..v.len()).all(|i| v[i] <= self.affine(i, v) + 1e-9)
    }
}

/// Maximizes `t` subject to `A(λ)u + t·1 ≤ b`, `0 ≤ u ≤ v̄`, `t ≤ 1`.
fn strict_region_nonempty(b: &[f64], lambda: &[f64], vmax: &[f64]) -> Result<bool> {
    let n = b.len();
    // Variables: u (n), t⁺, t⁻, slacks s (n), box slacks z (n), cap slack y.
    let cols = 3 * n + 3;
    let mut a = Vec::with_capacity(2 * n + 1);
    let mut rhs = Vec::with_capacity(2 * n + 1);
    for i in 0..n {
        let mut row = vec![0.0; cols];
        for j in 0..n {
            row[j] = if i == j { 1.0 } else { -lambda[j] };
        }
        row[n] = 1.0;
        row[n + 1] = -1.0;
        row[n + 2 + i] = 1.0;
        a.push(row);
        rhs.push(b[i]);
    }
    for i in 0..n {
        let mut row = vec![0.0; cols];
        row[i] = 1.0;
        row[2 * n + 2 + i] = 1.0;
        a.push(row);
        rhs.push(vmax[i]);
    }
    let mut cap = vec![0.0; cols];
    cap[n] = 1.0;
    cap[cols - 1] = 1.0;
    a.push(cap);
    rhs.push(1.0);
    let mut cost = vec![0.0; cols];
    cost[n] = -1.0;
    cost[n + 1] = 1.0;
    match solve_standard(&a, &rhs, &cost) {
        LpOutcome::Optimal(s) => Ok(-s.objective > 1e-12),
        other => Err(Error::Numerical(format!("no-sale region LP failed: {other:?}"))),
    }
}

/// Removes bidders with negative multipliers.
///
/// Such bidders get the constant threshold `v̄_i`; every other bidder's
/// threshold is re-tabulated with the removed bidders' values set to zero.
/// The returned multipliers are `max(λ, 0)`.
pub fn grand_case_split(mech: &GridMechanism, lambda: &[f64]) -> (GridMechanism, Vec<f64>) {
    let n = mech.bidders();
    let negative: Vec<bool> = lambda.iter().map(|&l| l < -NEGATIVE_TOL).collect();
    let clipped: Vec<f64> = lambda.iter().map(|&l| l.max(0.0)).collect();
    if !negative.contains(&true) {
        return (mech.clone(), clipped);
    }
    let vmax = mech.vmax().to_vec();
    let tables = (0..n)
        .map(|i| {
            mech.rival_nodes(i)
                .map(|mut w| {
                    if negative[i] {
                        return vmax[i];
                    }
                    for j in 0..n {
                        if negative[j] {
                            w[j] = 0.0;
                        }
                    }
                    mech.threshold(i, &w)
                })
                .collect()
        })
        .collect();
    let split = GridMechanism::new(mech.coords().to_vec(), tables)
        .expect("re-tabulated thresholds stay in range");
    (split, clipped)
}

/// Best affine minorant with slopes `λ_{-i}`:
/// `b_i = min_w p_i(w) − λ_{-i}·w` over the mechanism's rival nodes.
pub fn tilde_transform(mech: &GridMechanism, lambda: &[f64]) -> Result<AffineThresholds> {
    let n = mech.bidders();
    if lambda.len() != n {
        return Err(Error::Domain("one multiplier per bidder is required".into()));
    }
    let b = (0..n)
        .map(|i| {
            mech.rival_nodes(i)
                .zip(&mech.tables()[i])
                .map(|(w, &p)| {
                    p - (0..n).filter(|&j| j != i).map(|j| lambda[j] * w[j]).sum::<f64>()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    AffineThresholds::new(b, lambda.to_vec(), mech.vmax().to_vec())
}

/// `A(λ)`: ones on the diagonal, `−λ_j` in column `j` elsewhere.
pub fn matrix_a(lambda: &[f64]) -> Vec<Vec<f64>> {
    let n = lambda.len();
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { -lambda[j] }).collect())
        .collect()
}

/// `det A(λ) = (1 − Σ λ_i/(1 + λ_i)) · Π (1 + λ_i)`.
pub fn det_a(lambda: &[f64]) -> f64 {
    let s: f64 = lambda.iter().map(|l| l / (1.0 + l)).sum();
    let p: f64 = lambda.iter().map(|l| 1.0 + l).product();
    (1.0 - s) * p
}

/// One step of the clamped map `v ↦ clamp(p̃(v), 0, v̄)`.
fn step(pt: &AffineThresholds, v: &[f64]) -> Vec<f64> {
    (0..v.len()).map(|i| pt.threshold(i, v).min(pt.vmax[i])).collect()
}

fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Solves `A(λ)v = b` on the coordinates strictly inside `(0, v̄)`, keeping
/// the others fixed. `None` when that subsystem is singular.
fn polish(pt: &AffineThresholds, v: &[f64]) -> Option<Vec<f64>> {
    let n = v.len();
    let free: Vec<usize> =
        (0..n).filter(|&i| v[i] > NODE_TOL && v[i] < pt.vmax[i] - NODE_TOL).collect();
    let mut out: Vec<f64> = v.to_vec();
    for i in 0..n {
        if !free.contains(&i) {
            out[i] = if v[i] <= NODE_TOL { 0.0 } else { pt.vmax[i] };
        }
    }
    if free.is_empty() {
        return Some(out);
    }
    let a: Vec<Vec<f64>> = free
        .iter()
        .map(|&i| free.iter().map(|&j| if i == j { 1.0 } else { -pt.lambda[j] }).collect())
        .collect();
    let rhs: Vec<f64> = free
        .iter()
        .map(|&i| {
            pt.b[i]
                + (0..n)
                    .filter(|&j| j != i && !free.contains(&j))
                    .map(|j| pt.lambda[j] * out[j])
                    .sum::<f64>()
        })
        .collect();
    let x = linalg::solve(&a, &rhs, 1e-12)?;
    for (k, &i) in free.iter().enumerate() {
        out[i] = x[k];
    }
    Some(out)
}

/// Least fixed point of `v ↦ clamp(p̃(v), 0, v̄)`, reached by iterating
/// from the origin. The map is monotone, so the iterates increase towards
/// it; linear solves on the current active set shortcut slow progress.
pub fn least_fixed_point(pt: &AffineThresholds) -> Result<Vec<f64>> {
    let n = pt.bidders();
    let mut v = vec![0.0; n];
    for it in 0..MAX_ITERATIONS {
        let next = step(pt, &v);
        let change = sup_distance(&next, &v);
        v = next;
        if change < FIXED_POINT_TOL || it % 64 == 63 {
            if let Some(c) = polish(pt, &v) {
                let valid = sup_distance(&step(pt, &c), &c) <= 1e-11
                    && c.iter().zip(&v).all(|(a, b)| *a >= b - 1e-9);
                if valid {
                    return Ok(c);
                }
            }
            if change < FIXED_POINT_TOL {
                return Ok(v);
            }
        }
    }
    Err(Error::Numerical("fixed-point iteration did not converge".into()))
}

/// `R(p, λ) = λ·m + min_v (t(v) − λ·v)` over the nodes of `grid`, with `t`
/// the lower revenue envelope of the thresholds (see
/// [`crate::auction::revenue_floor`]). Equivalently, the three-part
/// infimum over the sets `{v_i ≥ p_i}` and the closure of the no-sale
/// region, restricted to the grid.
pub fn lagrangian_on_grid<T: Thresholds + ?Sized>(
    mech: &T,
    lambda: &[f64],
    instance: &Instance,
    grid: &ProductGrid,
) -> f64 {
    dual_value(&RevenueTable::floor_of(mech, grid.clone()), instance, lambda)
}

/// Trace of one [`dominating_lsa`] run. All Lagrangian values use the
/// same evaluation grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Audit {
    /// Nature's dual multipliers for the input mechanism.
    pub lambda_dual: Vec<f64>,
    /// Multipliers after removing negative entries.
    pub lambda_split: Vec<f64>,
    /// Bidders (0-based) removed by the split.
    pub excluded: Vec<usize>,
    /// Intercepts `b` of the affine minorant.
    pub intercepts: Vec<f64>,
    pub fixed_point: Vec<f64>,
    /// `R(p, λ)`.
    pub r_input: f64,
    /// `R(p_split, λ_split)`.
    pub r_split: f64,
    /// `R(p̃, λ_split)`.
    pub r_tilde: f64,
    /// `R(p̂, λ_split)` for the output auction `p̂`.
    pub r_output: f64,
    /// Input guarantee on the evaluation grid.
    pub input_guarantee: f64,
    /// Output guarantee on the auction's breakpoint grid.
    pub output_guarantee: f64,
    pub grid_nodes: usize,
    pub refinements: usize,
    /// Whether the fixed point lies on the evaluation grid.
    pub fixed_point_on_grid: bool,
}

/// A corner-hitting auction whose revenue guarantee weakly exceeds that of
/// `mech`, with an audit of the intermediate Lagrangian values.
///
/// The evaluation grid starts as the mechanism's breakpoint grid and is
/// refined with the fixed point's coordinates until they are nodes.
pub fn dominating_lsa(
    mech: &GridMechanism,
    instance: &Instance,
) -> Result<(LinearScoreAuction, Audit)> {
    if mech.vmax() != instance.vmax() {
        return Err(Error::InvalidInstance(
            "mechanism grid and instance disagree on the upper bounds".into(),
        ));
    }
    mech.require_feasible()?;
    let mut grid = mechanism_grid(mech, &[]);
    let mut refinements = 0;
    loop {
        let wc = guarantee_on(mech, grid.clone(), instance)?;
        let lambda = wc.certificate.lambda.clone();
        let (split, lambda2) = grand_case_split(mech, &lambda);
        let pt = tilde_transform(&split, &lambda2)?;
        let v_star = least_fixed_point(&pt)?;
        let lsa = LinearScoreAuction::corner_hitting(&v_star, mech.vmax())?;
        let extra: Vec<Vec<f64>> = v_star.iter().map(|&x| vec![x]).collect();
        let refined = grid.with_extra(&extra);
        let on_grid = refined.len() == grid.len();
        if !on_grid && refinements < MAX_REFINEMENTS {
            grid = refined;
            refinements += 1;
            continue;
        }
        let excluded = (0..lambda.len()).filter(|&i| lambda[i] < -NEGATIVE_TOL).collect();
        let output = guarantee_on(&lsa, auction_grid(&lsa), instance)?;
        let audit = Audit {
            r_input: lagrangian_on_grid(mech, &lambda, instance, &grid),
            r_split: lagrangian_on_grid(&split, &lambda2, instance, &grid),
            r_tilde: lagrangian_on_grid(&pt, &lambda2, instance, &grid),
            r_output: lagrangian_on_grid(&lsa, &lambda2, instance, &grid),
            input_guarantee: wc.value,
            output_guarantee: output.value,
            lambda_dual: lambda,
            lambda_split: lambda2,
            excluded,
            intercepts: pt.intercepts().to_vec(),
            fixed_point: v_star,
            grid_nodes: grid.len(),
            refinements,
            fixed_point_on_grid: on_grid,
        };
        return Ok((lsa, audit));
    }
}
