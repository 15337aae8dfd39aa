//! Optimal auctions in closed form: the regime, the optimal multipliers,
//! the optimal generalized reserves and their revenue guarantee.

use serde::{Deserialize, Serialize};

use crate::auction::LinearScoreAuction;
use crate::dual::lsa2_asym_guarantee;
use crate::error::{Error, Result};
use crate::instance::Instance;

const SET_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `Σ √(1 − m_i/v̄) > n − 1`: unique optimal reserves.
    LowMeans,
    /// Otherwise: a segment of optimal reserves.
    HighMeans,
}

/// Regime of an equal-bounds instance. The boundary belongs to
/// [`Regime::HighMeans`].
pub fn regime(instance: &Instance) -> Result<Regime> {
    let h = instance.require_common_vmax()?;
    let s: f64 = instance.means().iter().map(|m| (1.0 - m / h).sqrt()).sum();
    Ok(if s > (instance.n() - 1) as f64 { Regime::LowMeans } else { Regime::HighMeans })
}

/// Optimal multipliers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalLambda {
    pub lambda: Vec<f64>,
    /// 1-based position, in ascending order of means, of the first bidder
    /// with a positive multiplier (high-means regime only).
    pub k_star: Option<usize>,
    /// Bidders (0-based) with a zero multiplier.
    pub weakly_excluded: Vec<usize>,
}

/// Ascending order of means, ties broken by index.
fn ascending(instance: &Instance) -> Vec<usize> {
    let mut order: Vec<usize> = (0..instance.n()).collect();
    order.sort_by(|&a, &b| instance.means()[a].total_cmp(&instance.means()[b]));
    order
}

pub fn optimal_lambda(instance: &Instance) -> Result<OptimalLambda> {
    let h = instance.require_common_vmax()?;
    let n = instance.n();
    let m = instance.means();
    match regime(instance)? {
        Regime::LowMeans => Ok(OptimalLambda {
            lambda: m.iter().map(|mi| (h / (h - mi)).sqrt() - 1.0).collect(),
            k_star: None,
            weakly_excluded: Vec::new(),
        }),
        Regime::HighMeans => {
            let order = ascending(instance);
            let gap = |pos: usize| (h - m[order[pos - 1]]).sqrt();
            let k_star = (1..n)
                .find(|&k| {
                    let tail: f64 = (k + 1..=n).map(gap).sum();
                    tail / gap(k) > (n - k - 1) as f64
                })
                .ok_or_else(|| Error::Numerical("no cutoff index found".into()))?;
            let level: f64 = (k_star..=n).map(gap).sum::<f64>() / (n - k_star) as f64;
            let mut lambda = vec![0.0; n];
            for pos in k_star..=n {
                lambda[order[pos - 1]] = level / gap(pos) - 1.0;
            }
            let weakly_excluded = (0..n).filter(|&i| lambda[i] == 0.0).collect();
            Ok(OptimalLambda { lambda, k_star: Some(k_star), weakly_excluded })
        }
    }
}

/// Objective of the reduced multiplier problem,
/// `Σ m_i λ_i − λ_i² v̄/(1 + λ_i)`.
pub fn reduced_objective(lambda: &[f64], instance: &Instance) -> f64 {
    let h = instance.vmax()[0];
    lambda
        .iter()
        .zip(instance.means())
        .map(|(l, m)| m * l - l * l * h / (1.0 + l))
        .sum()
}

/// `Σ λ_i/(1 + λ_i)`, at most one for admissible multipliers.
pub fn geometry(lambda: &[f64]) -> f64 {
    lambda.iter().map(|l| l / (1.0 + l)).sum()
}

/// Multipliers `(ξ, κ)` of the reduced problem's constraints in the
/// high-means regime: `ξ` for the geometry constraint and `κ_i` for
/// `λ_i ≥ 0`.
pub fn kkt_multipliers(instance: &Instance) -> Result<(f64, Vec<f64>)> {
    let h = instance.require_common_vmax()?;
    let sol = optimal_lambda(instance)?;
    let k = sol
        .k_star
        .ok_or_else(|| Error::Domain("KKT multipliers are stated for high means".into()))?;
    let n = instance.n();
    let order = ascending(instance);
    let s: f64 = (k..=n).map(|pos| (h - instance.means()[order[pos - 1]]).sqrt()).sum();
    let xi = h - s * s / ((n - k) * (n - k)) as f64;
    let kappa = instance.means().iter().map(|m| (xi - m).max(0.0)).collect();
    Ok((xi, kappa))
}

/// Every optimal reserve vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ReserveSet {
    Unique(Vec<f64>),
    /// `r_i = v̄ − c·√(v̄ − m_i)` for `i` in `bidders`, with `c` in
    /// `[scale_min, scale_max]`; other bidders' reserves are arbitrary.
    /// `scale_min` makes `Σ r_i = v̄` (largest reserves); `scale_max` makes
    /// the smallest reserve zero.
    Segment {
        bidders: Vec<usize>,
        scale_min: f64,
        scale_max: f64,
        /// Reserves at `scale_max`, excluded bidders at `v̄`.
        lower_end: Vec<f64>,
        /// Reserves at `scale_min`, excluded bidders at `v̄`.
        upper_end: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalSolution {
    pub regime: Regime,
    pub lambda_star: Vec<f64>,
    pub k_star: Option<usize>,
    pub weakly_excluded: Vec<usize>,
    pub reserves: Vec<f64>,
    pub reserve_set: ReserveSet,
    pub guarantee: f64,
}

impl OptimalSolution {
    pub fn auction(&self, instance: &Instance) -> Result<LinearScoreAuction> {
        LinearScoreAuction::corner_hitting(&self.reserves, instance.vmax())
    }
}

pub fn optimal_reserves(instance: &Instance) -> Result<OptimalSolution> {
    let h = instance.require_common_vmax()?;
    let n = instance.n();
    let m = instance.means();
    let reg = regime(instance)?;
    let lam = optimal_lambda(instance)?;
    let guarantee = reduced_objective(&lam.lambda, instance);
    let (reserves, reserve_set) = match reg {
        Regime::LowMeans => {
            let r: Vec<f64> = m.iter().map(|mi| h - (h * (h - mi)).sqrt()).collect();
            (r.clone(), ReserveSet::Unique(r))
        }
        Regime::HighMeans => {
            let bidders: Vec<usize> = (0..n).filter(|i| !lam.weakly_excluded.contains(i)).collect();
            let roots: Vec<f64> = (0..n).map(|i| (h - m[i]).sqrt()).collect();
            let s: f64 = bidders.iter().map(|&i| roots[i]).sum();
            let scale_min = (bidders.len() - 1) as f64 * h / s;
            let scale_max = bidders.iter().map(|&i| h / roots[i]).fold(f64::INFINITY, f64::min);
            let at = |c: f64| -> Vec<f64> {
                (0..n)
                    .map(|i| if bidders.contains(&i) { (h - c * roots[i]).max(0.0) } else { h })
                    .collect()
            };
            let canonical = (0..n)
                .map(|i| {
                    if bidders.contains(&i) {
                        let l = lam.lambda[i];
                        l * h / (1.0 + l)
                    } else {
                        h
                    }
                })
                .collect();
            let set = ReserveSet::Segment {
                lower_end: at(scale_max),
                upper_end: at(scale_min),
                bidders,
                scale_min,
                scale_max,
            };
            (canonical, set)
        }
    };
    Ok(OptimalSolution {
        regime: reg,
        lambda_star: lam.lambda,
        k_star: lam.k_star,
        weakly_excluded: lam.weakly_excluded,
        reserves,
        reserve_set,
        guarantee,
    })
}

/// Whether `r` is an optimal reserve vector.
pub fn reserve_is_optimal(r: &[f64], instance: &Instance) -> Result<bool> {
    let h = instance.require_common_vmax()?;
    if r.len() != instance.n() {
        return Err(Error::Domain("one reserve per bidder is required".into()));
    }
    let sol = optimal_reserves(instance)?;
    Ok(match sol.reserve_set {
        ReserveSet::Unique(opt) => opt.iter().zip(r).all(|(a, b)| (a - b).abs() <= SET_TOL),
        ReserveSet::Segment { bidders, .. } => {
            let m = instance.means();
            let sum: f64 = bidders.iter().map(|&i| r[i]).sum();
            let in_box = bidders.iter().all(|&i| r[i] >= -SET_TOL && r[i] <= h + SET_TOL);
            let ratios = bidders.windows(2).all(|w| {
                let (i, j) = (w[0], w[1]);
                ((h - r[i]) * (h - m[j]).sqrt() - (h - r[j]) * (h - m[i]).sqrt()).abs() <= SET_TOL
            });
            in_box && ratios && sum <= h + SET_TOL
        }
    })
}

/// Closed interval of optimal common reserves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

/// Optimal reserves of the second-price auction for `n` bidders with a
/// common mean `m`.
pub fn symmetric_reserve_set(m: f64, vmax: f64, n: usize) -> Result<Interval> {
    if !(m > 0.0 && m < vmax) || n < 2 {
        return Err(Error::Domain("need 0 < m < v̄ and n ≥ 2".into()));
    }
    let threshold = 1.0 / (1.0 - (1.0 - m / vmax).sqrt());
    Ok(if (n as f64) < threshold {
        let r = vmax - (vmax * (vmax - m)).sqrt();
        Interval { lo: r, hi: r }
    } else {
        Interval { lo: 0.0, hi: vmax / n as f64 }
    })
}

/// Optimal slopes for two bidders with `v̄₁ ≥ v̄₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SlopeSet {
    /// Any `γ` in the interval is optimal.
    Interval { lo: f64, hi: f64 },
    /// The unique optimal slope.
    Point(f64),
}

/// Optimal auction for two bidders with unequal upper bounds: scores
/// `γ(v₁ − r₁)` and `v₂ − r₂`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymmetricSolution {
    pub low_means: bool,
    pub slopes: SlopeSet,
    /// Slope used for [`AsymmetricSolution::auction`].
    pub gamma: f64,
    /// Bidder 1's threshold when bidder 2 bids `v̄₂`.
    pub v1_tilde: f64,
    /// Canonical reserves; in the high-means case the maximal ones, with
    /// `r₁/v̄₁ + r₂/v̄₂ = 1`.
    pub reserves: Vec<f64>,
    pub guarantee: f64,
    pub lambda: Vec<f64>,
}

impl AsymmetricSolution {
    pub fn auction(&self, instance: &Instance) -> Result<LinearScoreAuction> {
        let r = &self.reserves;
        LinearScoreAuction::new(
            vec![self.gamma * r[0], r[1]],
            vec![self.gamma, 1.0],
            instance.vmax().to_vec(),
        )
    }

    /// Whether `r` belongs to the optimal price set (high-means case: the
    /// ratio condition with the returned `γ` and the sum bound).
    pub fn price_is_optimal(&self, r: &[f64], instance: &Instance) -> bool {
        let h = instance.vmax();
        if self.low_means {
            return self.reserves.iter().zip(r).all(|(a, b)| (a - b).abs() <= SET_TOL);
        }
        let ratio_ok = ((h[1] - r[1]) - self.gamma * (self.v1_tilde - r[0])).abs() <= SET_TOL;
        ratio_ok && r[0] / h[0] + r[1] / h[1] <= 1.0 + SET_TOL && r.iter().all(|&x| x >= -SET_TOL)
    }
}

/// Left-hand side minus right-hand side of the slope equation
/// `(v̄₁ − v̄₂)/(γ + 1)² + (v̄₂ − m₂)/γ² = v̄₁ − m₁`.
pub fn gamma_residual(gamma: f64, instance: &Instance) -> f64 {
    let (h, m) = (instance.vmax(), instance.means());
    (h[0] - h[1]) / (gamma + 1.0).powi(2) + (h[1] - m[1]) / (gamma * gamma) - (h[0] - m[0])
}

fn solve_gamma(instance: &Instance) -> Result<f64> {
    let f = |g: f64| gamma_residual(g, instance);
    let (mut lo, mut hi) = (1e-9, 1e9);
    let mut guard = 0;
    while f(lo) < 0.0 {
        lo /= 10.0;
        guard += 1;
        if guard > 50 {
            return Err(Error::Numerical("cannot bracket the slope equation".into()));
        }
    }
    while f(hi) > 0.0 {
        hi *= 10.0;
        guard += 1;
        if guard > 100 {
            return Err(Error::Numerical("cannot bracket the slope equation".into()));
        }
    }
    // Bisection on a log scale first, then plain bisection to width 1e-12.
    while hi / lo > 2.0 {
        let mid = (lo * hi).sqrt();
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn asymmetric2_solve(instance: &Instance) -> Result<AsymmetricSolution> {
    instance.require_two()?;
    let (h, m) = (instance.vmax(), instance.means());
    if h[0] < h[1] {
        return Err(Error::Domain("bidder 1 must have the larger upper bound".into()));
    }
    let s = (1.0 - m[0] / h[0]).sqrt() + (1.0 - m[1] / h[1]).sqrt();
    if s > 1.0 {
        let r: Vec<f64> = (0..2).map(|i| h[i] - (h[i] * (h[i] - m[i])).sqrt()).collect();
        let lo = r[0] / (h[0] - r[0]);
        let hi = (h[1] - r[1]) / r[1];
        let gamma = (lo * hi).sqrt();
        let v1_tilde = (r[0] + (h[1] - r[1]) / gamma).min(h[0]);
        let (guarantee, lambda) = lsa2_asym_guarantee(&r, v1_tilde, instance)?;
        Ok(AsymmetricSolution {
            low_means: true,
            slopes: SlopeSet::Interval { lo, hi },
            gamma,
            v1_tilde,
            reserves: r,
            guarantee,
            lambda,
        })
    } else {
        let gamma = solve_gamma(instance)?;
        let v1_tilde = (gamma * h[0] + h[1]) / (gamma + 1.0);
        let r = vec![gamma * h[0] / (1.0 + gamma), h[1] / (1.0 + gamma)];
        let (guarantee, lambda) = lsa2_asym_guarantee(&r, v1_tilde, instance)?;
        Ok(AsymmetricSolution {
            low_means: false,
            slopes: SlopeSet::Point(gamma),
            gamma,
            v1_tilde,
            reserves: r,
            guarantee,
            lambda,
        })
    }
}
