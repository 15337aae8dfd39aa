//! Membership in the set of all optimal mechanisms for two bidders with a
//! common upper bound.
//!
//! Optimal thresholds are pinned down by the optimal multipliers `λ*` and
//! reserves `r*`: each `p_i` must stay above the line through `r*` with
//! slope `λ*_{-i}` and, where the rival is below her reserve, under the
//! line `λ*·v = λ*·r*`. With low means the two thresholds must be mutually
//! inverse increasing curves above the reserves; with high means they must
//! coincide with the lower line there.

use serde::{Deserialize, Serialize};

use crate::auction::{GridMechanism, Thresholds};
use crate::error::{Error, Result};
use crate::grid::MERGE_TOL;
use crate::instance::Instance;
use crate::solve::{optimal_reserves, Regime};

/// Tolerance for every membership comparison.
pub const TAU: f64 = 1e-9;

/// A failed membership condition.
///
/// For conditions 1–3 `at` is the rival's value `v_{-i}`, `value` is
/// `p_i(v_{-i})` and `bound` is the envelope it violates. For condition 4
/// `at` is bidder `i`'s own value, `value` is `p_i(p_{-i}(at))` and `bound`
/// is `at`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: u8,
    pub bidder: usize,
    pub at: f64,
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    pub regime: Regime,
    pub lambda: Vec<f64>,
    pub reserves: Vec<f64>,
    pub violations: Vec<Violation>,
}

/// Bidder `i`'s threshold as a function of the single rival value `w`.
fn threshold_at(mech: &GridMechanism, i: usize, w: f64) -> f64 {
    let mut v = [0.0, 0.0];
    v[1 - i] = w;
    mech.threshold(i, &v)
}

/// Rival values at which bidder `i`'s conditions are checked: the rival's
/// grid axis plus `0`, `r*_{-i}` and `v̄`.
fn check_points(mech: &GridMechanism, i: usize, r_rival: f64, h: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = mech.grid().axis(1 - i).to_vec();
    pts.extend([0.0, r_rival, h]);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= MERGE_TOL);
    pts
}

pub fn member(mech: &GridMechanism, instance: &Instance) -> Result<Membership> {
    instance.require_two()?;
    let h = instance.require_common_vmax()?;
    if mech.bidders() != 2 {
        return Err(Error::Domain("membership is defined for two bidders".into()));
    }
    if mech.vmax() != instance.vmax() {
        return Err(Error::InvalidInstance(
            "mechanism grid and instance disagree on the upper bounds".into(),
        ));
    }
    mech.require_feasible()?;
    let sol = optimal_reserves(instance)?;
    let (lam, r) = (&sol.lambda_star, &sol.reserves);
    let level = lam[0] * r[0] + lam[1] * r[1];
    let mut violations = Vec::new();
    let mut flag = |condition: u8, bidder: usize, at: f64, value: f64, bound: f64| {
        violations.push(Violation { condition, bidder, at, value, bound });
    };

    for i in 0..2 {
        let o = 1 - i;
        let lower = |w: f64| r[i] + lam[o] * (w - r[o]);
        let upper = |w: f64| (level - lam[o] * w) / lam[i];
        let pts = check_points(mech, i, r[o], h);
        let vals: Vec<f64> = pts.iter().map(|&w| threshold_at(mech, i, w)).collect();
        let (c_lower, c_upper) = match sol.regime {
            Regime::LowMeans => (1, 2),
            Regime::HighMeans => (2, 3),
        };
        for (&w, &p) in pts.iter().zip(&vals) {
            if p < lower(w) - TAU {
                flag(c_lower, i, w, p, lower(w));
            }
            if w <= r[o] + TAU && p > upper(w) + TAU {
                flag(c_upper, i, w, p, upper(w));
            }
            if sol.regime == Regime::HighMeans && w >= r[o] - TAU && (p - lower(w)).abs() > TAU {
                flag(1, i, w, p, lower(w));
            }
        }
        if sol.regime == Regime::LowMeans {
            let above: Vec<(f64, f64)> = pts
                .iter()
                .zip(&vals)
                .filter(|(&w, _)| w >= r[o] - TAU)
                .map(|(&w, &p)| (w, p))
                .collect();
            for pair in above.windows(2) {
                let ((_, p0), (w1, p1)) = (pair[0], pair[1]);
                if p1 < p0 - TAU {
                    flag(3, i, w1, p1, p0);
                }
            }
        }
    }

    if sol.regime == Regime::LowMeans {
        // Condition 4: on every interval where p_o strictly increases in
        // v_i ≥ r*_i, p_i(p_o(v_i)) = v_i.
        for i in 0..2 {
            let o = 1 - i;
            let pts: Vec<f64> =
                check_points(mech, o, r[i], h).into_iter().filter(|&x| x >= r[i] - TAU).collect();
            let inner = check_points(mech, i, r[o], h);
            for pair in pts.windows(2) {
                let (x0, x1) = (pair[0], pair[1]);
                let (y0, y1) = (threshold_at(mech, o, x0), threshold_at(mech, o, x1));
                if y1 - y0 <= TAU {
                    continue;
                }
                let mut probes = vec![x0, x1];
                for &c in &inner {
                    if c > y0 && c < y1 {
                        probes.push(x0 + (c - y0) * (x1 - x0) / (y1 - y0));
                    }
                }
                for x in probes {
                    let back = threshold_at(mech, i, threshold_at(mech, o, x));
                    if (back - x).abs() > TAU {
                        flag(4, i, x, back, x);
                    }
                }
            }
        }
    }

    violations.sort_by(|a, b| {
        (a.condition, a.bidder).cmp(&(b.condition, b.bidder)).then(a.at.total_cmp(&b.at))
    });
    violations.dedup();
    Ok(Membership {
        member: violations.is_empty(),
        regime: sol.regime,
        lambda: sol.lambda_star.clone(),
        reserves: sol.reserves.clone(),
        violations,
    })
}
