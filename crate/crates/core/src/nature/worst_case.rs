//! Closed-form worst-case distributions for two bidders facing a
//! corner-hitting auction with reserves below the means.

use serde::{Deserialize, Serialize};

use super::{auction_grid, guarantee_on, DiscreteDistribution};
use crate::auction::LinearScoreAuction;
use crate::dual::lsa_lagrangian;
use crate::error::{Error, Result};
use crate::instance::Instance;

const BOUNDARY_TOL: f64 = 1e-12;

/// Shape of the worst-case support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WorstCaseType {
    /// Mass on the wall `max(v1, v2) = v̄` only.
    I,
    /// Mass on `(r1, r2)`, `(r1, v̄)` and `(v̄, r2)`.
    II,
    /// Mass on `(r1, r2)` and one wall.
    III,
}

/// The curve `r̄₂(r₁) = (m₂(v̄ − r₁) − v̄(v̄ − m₁))/(m₁ − r₁)` separating
/// types I and II.
pub fn reserve_boundary(r1: f64, instance: &Instance) -> Result<f64> {
    instance.require_two()?;
    let h = instance.require_common_vmax()?;
    let m = instance.means();
    if r1 >= m[0] {
        return Err(Error::Domain("the boundary is defined for r1 < m1".into()));
    }
    Ok((m[1] * (h - r1) - h * (h - m[0])) / (m[0] - r1))
}

fn check_reserves(r: &[f64], instance: &Instance) -> Result<f64> {
    instance.require_two()?;
    let h = instance.require_common_vmax()?;
    if r.len() != 2 {
        return Err(Error::Domain("two reserves are required".into()));
    }
    for i in 0..2 {
        if !(r[i] >= 0.0 && r[i] < instance.means()[i]) {
            return Err(Error::Domain(format!(
                "reserve of bidder {} must lie in [0, m_{})",
                i + 1,
                i + 1
            )));
        }
    }
    Ok(h)
}

/// Classifies the worst-case distribution for reserves `r`.
pub fn wcdistr2_classify(r: &[f64], instance: &Instance) -> Result<WorstCaseType> {
    let h = check_reserves(r, instance)?;
    let wall = h - r[0];
    if (r[1] - wall).abs() <= BOUNDARY_TOL {
        return Err(Error::Boundary(format!("r2 = v̄ − r1 = {wall}")));
    }
    if r[1] > wall {
        return Ok(WorstCaseType::III);
    }
    let rbar = reserve_boundary(r[0], instance)?;
    if (r[1] - rbar).abs() <= BOUNDARY_TOL {
        return Err(Error::Boundary(format!("r2 equals the type boundary {rbar}")));
    }
    Ok(if r[1] < rbar { WorstCaseType::I } else { WorstCaseType::II })
}

/// The two multiplier pairs that can be optimal in type III, with their
/// Lagrangian values.
pub fn type_three_candidates(r: &[f64], instance: &Instance) -> Result<[(Vec<f64>, f64); 2]> {
    let h = check_reserves(r, instance)?;
    let a = vec![r[0] / (h - r[0]), (h - r[0]) / (h - r[1])];
    let b = vec![(h - r[1]) / (h - r[0]), r[1] / (h - r[1])];
    let va = lsa_lagrangian(r, &a, instance)?;
    let vb = lsa_lagrangian(r, &b, instance)?;
    Ok([(a, va), (b, vb)])
}

/// Optimal multipliers of Nature's dual for the corner-hitting auction with
/// reserves `r`. In type III the better of the two candidates is returned
/// (the first on an exact tie).
pub fn lsa2_dual_multipliers(r: &[f64], instance: &Instance) -> Result<Vec<f64>> {
    let h = check_reserves(r, instance)?;
    Ok(match wcdistr2_classify(r, instance)? {
        WorstCaseType::I => vec![(h - r[1]) / (h - r[0]), (h - r[0]) / (h - r[1])],
        WorstCaseType::II => vec![r[0] / (h - r[0]), r[1] / (h - r[1])],
        WorstCaseType::III => {
            let [(a, va), (b, vb)] = type_three_candidates(r, instance)?;
            if vb > va {
                b
            } else {
                a
            }
        }
    })
}

/// A worst-case distribution for the corner-hitting auction with reserves
/// `r`. Revenue is meant to be evaluated with the object unsold at
/// `(r1, r2)` (see [`crate::auction::revenue_floor`]).
pub fn wcdistr2_construct(r: &[f64], instance: &Instance) -> Result<DiscreteDistribution> {
    let h = check_reserves(r, instance)?;
    let m = instance.means();
    let vmax = instance.vmax();
    match wcdistr2_classify(r, instance)? {
        WorstCaseType::II => {
            let q1 = (m[0] - r[0]) / (h - r[0]);
            let q2 = (m[1] - r[1]) / (h - r[1]);
            let q0 = 1.0 - q1 - q2;
            if q0 < -1e-12 {
                return Err(Error::Regime(format!("type II weight at (r1, r2) is {q0}")));
            }
            DiscreteDistribution::new(
                vec![vec![r[0], r[1]], vec![h, r[1]], vec![r[0], h]],
                vec![q0.max(0.0), q1, q2],
                vmax,
            )
        }
        WorstCaseType::I => {
            let lo = ((h - m[1]) / (h - r[1])).max(0.0);
            let hi = ((m[0] - r[0]) / (h - r[0])).min(1.0);
            if lo > hi || hi <= 0.0 || lo >= 1.0 {
                let lsa = LinearScoreAuction::corner_hitting(r, vmax)?;
                return Ok(guarantee_on(&lsa, auction_grid(&lsa), instance)?.distribution);
            }
            let a = 0.5 * (lo + hi);
            let x = ((m[0] - a * h) / (1.0 - a)).clamp(r[0], h);
            let y = ((m[1] - (1.0 - a) * h) / a).clamp(r[1], h);
            DiscreteDistribution::new(vec![vec![h, y], vec![x, h]], vec![a, 1.0 - a], vmax)
        }
        WorstCaseType::III => {
            let lsa = LinearScoreAuction::corner_hitting(r, vmax)?;
            let mut best: Option<(f64, DiscreteDistribution)> = None;
            for wall in 0..2 {
                let other = 1 - wall;
                // Bidder `wall` sits at v̄ off the reserve corner.
                let q0 = (h - m[wall]) / (h - r[wall]);
                let qb = (m[other] - r[other]) / (h - r[other]);
                let qa = 1.0 - q0 - qb;
                if qa < -1e-12 {
                    continue;
                }
                let mut side = vec![0.0; 2];
                side[wall] = h;
                side[other] = r[other];
                let d = DiscreteDistribution::new(
                    vec![r.to_vec(), side, vec![h, h]],
                    vec![q0, qa.max(0.0), qb],
                    vmax,
                )?;
                let rev = d.expectation(|v| crate::auction::revenue_floor(&lsa, v));
                if best.as_ref().map_or(true, |(b, _)| rev < *b) {
                    best = Some((rev, d));
                }
            }
            best.map(|(_, d)| d)
                .ok_or_else(|| Error::Regime("no type III wall support fits the means".into()))
        }
    }
}
