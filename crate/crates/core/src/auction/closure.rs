//! Closure test for the no-sale region of tabulated mechanisms.
//!
//! A profile where some bidder sits exactly on her threshold belongs to the
//! closure of `{v : v_i < p_i(v_{-i}) ∀i}` when some direction `d` makes
//! every tight inequality strict to first order. Along each axis the
//! thresholds are piecewise linear, so in a fixed orthant of directions the
//! first-order change is linear in `d` and the question is a small LP.

use super::{Thresholds, NODE_TOL};
use crate::grid::MixedRadix;
use crate::nature::simplex::{solve_standard, LpOutcome};

/// `slope(i, v, j, up)` is the one-sided derivative of `p_i` along axis `j`.
pub(crate) fn no_sale_limit<T, F>(mech: &T, v: &[f64], slope: F) -> bool
where
    T: Thresholds + ?Sized,
    F: Fn(usize, &[f64], usize, bool) -> f64,
{
    let n = mech.bidders();
    let mut tight = Vec::new();
    for i in 0..n {
        let p = mech.threshold(i, v);
        if v[i] > p + NODE_TOL {
            return false;
        }
        if v[i] >= p - NODE_TOL {
            tight.push(i);
        }
    }
    if tight.is_empty() {
        return true;
    }
    let vmax = mech.vmax();
    // Per axis: +1 moves down (needs room above 0), −1 moves up.
    let options: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut o = Vec::new();
            if v[j] > NODE_TOL {
                o.push(1.0);
            }
            if v[j] < vmax[j] - NODE_TOL {
                o.push(-1.0);
            }
            o
        })
        .collect();
    if options.iter().any(Vec::is_empty) {
        return false;
    }
    MixedRadix::new(options.iter().map(Vec::len).collect()).any(|choice| {
        let sigma: Vec<f64> = choice.iter().enumerate().map(|(j, &k)| options[j][k]).collect();
        // Row i: σ_i e_i − Σ_j s_ij σ_j e_j, the first-order gap p_i − v_i
        // per unit step.
        let rows: Vec<Vec<f64>> = tight
            .iter()
            .map(|&i| {
                (0..n)
                    .map(|j| {
                        if j == i {
                            sigma[i]
                        } else {
                            -slope(i, v, j, sigma[j] < 0.0) * sigma[j]
                        }
                    })
                    .collect()
            })
            .collect();
        max_min_gap(&rows) > 1e-9
    })
}

/// `max_{e ∈ [0,1]^n} min_k rows_k · e`, clipped below at a negative
/// constant.
fn max_min_gap(rows: &[Vec<f64>]) -> f64 {
    let n = rows[0].len();
    let k = rows.len();
    let shift = 1.0 + rows.iter().flatten().map(|x| x.abs()).sum::<f64>();
    // Variables: e (n), t' (1), surplus w (k), slack u (n), slack z (1).
    let cols = n + 1 + k + n + 1;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        let mut line = vec![0.0; cols];
        line[..n].copy_from_slice(row);
        line[n] = -1.0;
        line[n + 1 + r] = -1.0;
        a.push(line);
        b.push(-shift);
    }
    for j in 0..n {
        let mut line = vec![0.0; cols];
        line[j] = 1.0;
        line[n + 1 + k + j] = 1.0;
        a.push(line);
        b.push(1.0);
    }
    let mut line = vec![0.0; cols];
    line[n] = 1.0;
    line[cols - 1] = 1.0;
    a.push(line);
    b.push(2.0 * shift);
    let mut c = vec![0.0; cols];
    c[n] = -1.0;
    match solve_standard(&a, &b, &c) {
        LpOutcome::Optimal(s) => s.x[n] - shift,
        _ => f64::NEG_INFINITY,
    }
}
