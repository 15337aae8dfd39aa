//! Deterministic dominant-strategy mechanisms described by threshold
//! functions: bidder `i` wins when her value exceeds `p_i(v_{-i})` and then
//! pays exactly that threshold.

mod closure;
mod lsa;
mod table;

pub use lsa::LinearScoreAuction;
pub use table::{FeasibilityReport, GridMechanism};

/// Absolute tolerance used when comparing a value with a threshold at a
/// grid node.
pub const NODE_TOL: f64 = 1e-10;

/// Threshold functions `p_i(v_{-i})` on the box `∏[0, v̄_i]`.
///
/// Profiles are always passed in full; the entry of the bidder whose
/// threshold is requested is ignored.
pub trait Thresholds {
    fn bidders(&self) -> usize;

    fn vmax(&self) -> &[f64];

    fn threshold(&self, i: usize, v: &[f64]) -> f64;

    /// Whether selling to `i` at price `p_i(v_{-i})` is an admissible
    /// outcome at `v` for Nature's problem. The default is `v_i ≥ p_i`.
    fn can_serve(&self, i: usize, v: &[f64]) -> bool {
        v[i] >= self.threshold(i, v) - NODE_TOL
    }

    /// Whether `v` lies in the closure of the no-sale region
    /// `{v : v_i < p_i(v_{-i}) for all i}`.
    fn no_sale_limit(&self, v: &[f64]) -> bool;
}

/// Revenue at `v` under the mechanism's own tie rule: a bidder strictly
/// above her threshold wins; otherwise the lowest-index bidder exactly at
/// her threshold wins; otherwise the object stays unsold.
///
/// Returns the winner and her payment.
pub fn outcome<T: Thresholds + ?Sized>(mech: &T, v: &[f64]) -> Option<(usize, f64)> {
    let n = mech.bidders();
    let p: Vec<f64> = (0..n).map(|i| mech.threshold(i, v)).collect();
    if let Some(i) = (0..n).find(|&i| v[i] > p[i] + NODE_TOL) {
        return Some((i, p[i]));
    }
    (0..n).find(|&i| (v[i] - p[i]).abs() <= NODE_TOL && p[i] <= mech.vmax()[i]).map(|i| (i, p[i]))
}

/// Lowest revenue among the outcomes Nature can approach at `v`.
///
/// This is the lower semicontinuous version of the revenue function; its
/// convex closure at the means is the mechanism's revenue guarantee.
pub fn revenue_floor<T: Thresholds + ?Sized>(mech: &T, v: &[f64]) -> f64 {
    let mut best = if mech.no_sale_limit(v) { 0.0 } else { f64::INFINITY };
    for i in 0..mech.bidders() {
        if mech.can_serve(i, v) {
            best = best.min(mech.threshold(i, v));
        }
    }
    if best.is_finite() {
        best
    } else {
        0.0
    }
}
