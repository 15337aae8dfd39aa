//! Closed-form Lagrangian of Nature's problem for corner-hitting auctions
//! and the exact revenue guarantee obtained by maximizing it.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::nature::dot;
use crate::nature::simplex::{solve_standard, LpOutcome};

/// Affine pieces `(constant, coefficients)` of the inner minimum, each a
/// function of `λ`. `ṽ₁` is bidder 1's threshold at `v₂ = v̄₂` when bounds
/// differ and `None` for equal bounds.
fn pieces(r: &[f64], vmax: &[f64], v1_tilde: Option<f64>) -> Vec<(f64, Vec<f64>)> {
    let n = r.len();
    let mut out = Vec::new();
    match v1_tilde {
        None => {
            let h = vmax[0];
            out.push((h, vec![-h; n]));
        }
        Some(vt) => {
            out.push((vt, vec![-vmax[0], -vmax[1]]));
            out.push((vmax[1], vec![-vt, -vmax[1]]));
        }
    }
    for i in 0..n {
        let coef = (0..n).map(|j| if j == i { -vmax[i] } else { -r[j] }).collect();
        out.push((r[i], coef));
    }
    // Exact comparison: a zero reserve empties the no-sale region.
    if r.iter().all(|&x| x != 0.0) {
        out.push((0.0, r.iter().map(|x| -x).collect()));
    }
    out
}

fn check(r: &[f64], lambda: &[f64], instance: &Instance) -> Result<()> {
    if r.len() != instance.n() || lambda.len() != instance.n() {
        return Err(Error::Domain("reserves and multipliers need one entry per bidder".into()));
    }
    if lambda.iter().any(|&l| !(l >= 0.0)) {
        return Err(Error::Domain("multipliers must be nonnegative".into()));
    }
    for (i, (&ri, &h)) in r.iter().zip(instance.vmax()).enumerate() {
        if !(ri >= 0.0 && ri <= h) {
            return Err(Error::Domain(format!("reserve of bidder {} outside [0, {h}]", i + 1)));
        }
    }
    Ok(())
}

fn evaluate(pieces: &[(f64, Vec<f64>)], lambda: &[f64], means: &[f64]) -> f64 {
    dot(lambda, means)
        + pieces
            .iter()
            .map(|(c, a)| c + dot(a, lambda))
            .fold(f64::INFINITY, f64::min)
}

/// Lagrangian `R(r, λ)` of the corner-hitting auction with reserves `r`
/// (equal upper bounds, `λ ≥ 0`).
pub fn lsa_lagrangian(r: &[f64], lambda: &[f64], instance: &Instance) -> Result<f64> {
    instance.require_common_vmax()?;
    check(r, lambda, instance)?;
    Ok(evaluate(&pieces(r, instance.vmax(), None), lambda, instance.means()))
}

/// Two-bidder Lagrangian for the auction with scores `γ(v₁ − r₁)` and
/// `v₂ − r₂` under bounds `v̄₁ ≥ v̄₂`, where `ṽ₁` is bidder 1's threshold
/// when bidder 2 bids `v̄₂`.
pub fn lsa2_asym_lagrangian(
    r: &[f64],
    v1_tilde: f64,
    lambda: &[f64],
    instance: &Instance,
) -> Result<f64> {
    instance.require_two()?;
    check(r, lambda, instance)?;
    if !(v1_tilde >= 0.0 && v1_tilde <= instance.vmax()[0]) {
        return Err(Error::Domain("ṽ₁ must lie in [0, v̄₁]".into()));
    }
    Ok(evaluate(&pieces(r, instance.vmax(), Some(v1_tilde)), lambda, instance.means()))
}

/// Maximizes `λ·m + u` subject to `u ≤ c_k + a_k·λ` and `λ ≥ 0`.
fn maximize(pieces: &[(f64, Vec<f64>)], means: &[f64]) -> Result<(f64, Vec<f64>)> {
    let n = means.len();
    let k = pieces.len();
    // Variables: λ (n), u⁺, u⁻, slacks s (k).
    let cols = n + 2 + k;
    let mut a = Vec::with_capacity(k);
    let mut b = Vec::with_capacity(k);
    for (row, (c, coef)) in pieces.iter().enumerate() {
        // u − a·λ + s = c
        let mut line = vec![0.0; cols];
        for j in 0..n {
            line[j] = -coef[j];
        }
        line[n] = 1.0;
        line[n + 1] = -1.0;
        line[n + 2 + row] = 1.0;
        a.push(line);
        b.push(*c);
    }
    let mut cost = vec![0.0; cols];
    for j in 0..n {
        cost[j] = -means[j];
    }
    cost[n] = -1.0;
    cost[n + 1] = 1.0;
    match solve_standard(&a, &b, &cost) {
        LpOutcome::Optimal(s) => {
            let lambda = s.x[..n].to_vec();
            Ok((evaluate(pieces, &lambda, means), lambda))
        }
        other => Err(Error::Numerical(format!("guarantee LP failed: {other:?}"))),
    }
}

/// Revenue guarantee of the corner-hitting auction with reserves `r`
/// (equal bounds) and a maximizing `λ ≥ 0`.
pub fn lsa_guarantee(r: &[f64], instance: &Instance) -> Result<(f64, Vec<f64>)> {
    instance.require_common_vmax()?;
    check(r, &vec![0.0; r.len()], instance)?;
    maximize(&pieces(r, instance.vmax(), None), instance.means())
}

/// Maximum of [`lsa2_asym_lagrangian`] over `λ ≥ 0`.
pub fn lsa2_asym_guarantee(
    r: &[f64],
    v1_tilde: f64,
    instance: &Instance,
) -> Result<(f64, Vec<f64>)> {
    lsa2_asym_lagrangian(r, v1_tilde, &[0.0, 0.0], instance)?;
    maximize(&pieces(r, instance.vmax(), Some(v1_tilde)), instance.means())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym(m: &[f64]) -> Instance {
        Instance::symmetric_bounds(m.to_vec(), 1.0).unwrap()
    }

    #[test]
    fn lagrangian_examples() {
        let v = lsa_lagrangian(&[0.4, 0.4], &[2.0 / 3.0, 2.0 / 3.0], &sym(&[0.64, 0.64])).unwrap();
        assert!((v - 0.32).abs() < 1e-12);
        let i = sym(&[0.75, 0.91]);
        let lam = [0.6, 5.0 / 3.0];
        let r = [3.0 / 8.0, 5.0 / 8.0];
        assert!((lsa_lagrangian(&r, &lam, &i).unwrap() - 0.7).abs() < 1e-12);
        for (c, a) in pieces(&r, i.vmax(), None) {
            assert!((c + dot(&a, &lam) + 19.0 / 15.0).abs() < 1e-12);
        }
        assert_eq!(lsa_lagrangian(&[0.3, 0.5], &[0.0, 0.0], &i).unwrap(), 0.0);
        assert!(lsa_lagrangian(&r, &[-0.1, 0.0], &i).is_err());
    }

    #[test]
    fn zero_reserve_drops_no_sale_piece() {
        assert_eq!(pieces(&[0.0, 0.4], &[1.0, 1.0], None).len(), 3);
        assert_eq!(pieces(&[0.1, 0.4], &[1.0, 1.0], None).len(), 4);
    }

    #[test]
    fn guarantee_examples() {
        let (v, lam) = lsa_guarantee(&[0.0, 0.0], &sym(&[0.6, 0.7])).unwrap();
        assert!((v - 0.3).abs() < 1e-12);
        assert!((lam[0] - 1.0).abs() < 1e-12 && (lam[1] - 1.0).abs() < 1e-12);
        let (v, _) = lsa_guarantee(&[0.4, 0.4], &sym(&[0.64, 0.64])).unwrap();
        assert!((v - 0.32).abs() < 1e-12);
        let (v, lam) = lsa_guarantee(&[0.3, 0.3], &sym(&[0.64, 0.64])).unwrap();
        let expected = 1.28 * 3.0 / 7.0 + 0.3 - 1.3 * 3.0 / 7.0;
        assert!((v - expected).abs() < 1e-12);
        assert!((lam[0] - 3.0 / 7.0).abs() < 1e-9 && (lam[1] - 3.0 / 7.0).abs() < 1e-9);
    }

    #[test]
    fn asymmetric_reduces_to_symmetric() {
        let i = sym(&[0.75, 0.91]);
        let r = [3.0 / 8.0, 5.0 / 8.0];
        let lam = [0.6, 5.0 / 3.0];
        let a = lsa2_asym_lagrangian(&r, 1.0, &lam, &i).unwrap();
        assert!((a - lsa_lagrangian(&r, &lam, &i).unwrap()).abs() < 1e-15);
        assert_eq!(lsa2_asym_lagrangian(&r, 1.0, &[0.0, 0.0], &i).unwrap(), 0.0);
    }

    #[test]
    fn kinks_equalize_at_reserve_response() {
        // r_i = λ_i v̄/(1+λ_i) with Σλ/(1+λ) < 1
        let i = sym(&[0.5, 0.6, 0.7]);
        let lam = [0.2, 0.3, 0.4];
        let r: Vec<f64> = lam.iter().map(|l| l / (1.0 + l)).collect();
        let vals: Vec<f64> =
            pieces(&r, i.vmax(), None).iter().skip(1).map(|(c, a)| c + dot(a, &lam)).collect();
        for v in &vals {
            assert!((v - vals[0]).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn lagrangian_is_concave(
            r in proptest::collection::vec(0.0f64..1.0, 3),
            a in proptest::collection::vec(0.0f64..3.0, 3),
            b in proptest::collection::vec(0.0f64..3.0, 3),
        ) {
            let i = sym(&[0.3, 0.5, 0.8]);
            let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
            let fa = lsa_lagrangian(&r, &a, &i).unwrap();
            let fb = lsa_lagrangian(&r, &b, &i).unwrap();
            let fm = lsa_lagrangian(&r, &mid, &i).unwrap();
            prop_assert!(fm >= 0.5 * (fa + fb) - 1e-12);
        }

        #[test]
        fn guarantee_dominates_every_multiplier(
            r in proptest::collection::vec(0.0f64..1.0, 2),
            lam in proptest::collection::vec(0.0f64..4.0, 2),
        ) {
            let i = sym(&[0.55, 0.8]);
            let (g, _) = lsa_guarantee(&r, &i).unwrap();
            prop_assert!(g >= lsa_lagrangian(&r, &lam, &i).unwrap() - 1e-12);
        }
    }
}
