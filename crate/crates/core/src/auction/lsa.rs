use serde::{Deserialize, Serialize};

use super::{Thresholds, NODE_TOL};
use crate::error::{Error, Result};

/// Scores closer than this count as tied.
const SCORE_TIE: f64 = 1e-12;

/// A linear score auction: bidder `i` has score `β_i v_i − α_i`; the
/// highest nonnegative score wins and pays the lowest value that would
/// still have won.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearScoreAuction {
    alphas: Vec<f64>,
    betas: Vec<f64>,
    excluded: Vec<bool>,
    vmax: Vec<f64>,
    /// Generalized reserves when built by [`LinearScoreAuction::corner_hitting`];
    /// scores are then evaluated as `(v − r)/(v̄ − r)` so that they are exactly
    /// 0 at the reserve and 1 at the upper bound.
    reserves: Option<Vec<f64>>,
}

impl LinearScoreAuction {
    /// General auction from score parameters. No bidder is excluded.
    pub fn new(alphas: Vec<f64>, betas: Vec<f64>, vmax: Vec<f64>) -> Result<Self> {
        let n = vmax.len();
        Self::with_exclusions(alphas, betas, vec![false; n], vmax)
    }

    pub fn with_exclusions(
        alphas: Vec<f64>,
        betas: Vec<f64>,
        excluded: Vec<bool>,
        vmax: Vec<f64>,
    ) -> Result<Self> {
        let n = vmax.len();
        if alphas.len() != n || betas.len() != n || excluded.len() != n {
            return Err(Error::Domain("score parameters must have one entry per bidder".into()));
        }
        for i in 0..n {
            if !(alphas[i] >= 0.0 && alphas[i].is_finite()) {
                return Err(Error::Domain(format!("bidder {}: alpha must be ≥ 0", i + 1)));
            }
            if !(betas[i] > 0.0 && betas[i].is_finite()) {
                return Err(Error::Domain(format!("bidder {}: beta must be > 0", i + 1)));
            }
        }
        Ok(Self { alphas, betas, excluded, vmax, reserves: None })
    }

    /// Corner-hitting auction with generalized reserves `r`: every included
    /// bidder's score runs from 0 at `r_i` to 1 at `v̄_i`. A bidder with
    /// `r_i = v̄_i` is excluded.
    pub fn corner_hitting(r: &[f64], vmax: &[f64]) -> Result<Self> {
        if r.len() != vmax.len() {
            return Err(Error::Domain("one reserve per bidder is required".into()));
        }
        let n = r.len();
        let (mut alphas, mut betas, mut excluded) = (vec![0.0; n], vec![1.0; n], vec![false; n]);
        for i in 0..n {
            let (ri, h) = (r[i], vmax[i]);
            if !(ri >= 0.0 && ri <= h) {
                return Err(Error::Domain(format!(
                    "bidder {}: reserve {ri} outside [0, {h}]",
                    i + 1
                )));
            }
            if ri < h {
                betas[i] = 1.0 / (h - ri);
                alphas[i] = ri / (h - ri);
            } else {
                alphas[i] = ri;
                excluded[i] = true;
            }
        }
        Ok(Self { alphas, betas, excluded, vmax: vmax.to_vec(), reserves: Some(r.to_vec()) })
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn excluded(&self) -> &[bool] {
        &self.excluded
    }

    /// Generalized reserves of a corner-hitting auction.
    pub fn reserves(&self) -> Option<&[f64]> {
        self.reserves.as_deref()
    }

    /// The value at which bidder `i`'s score is zero, `α_i/β_i` (or `v̄_i`
    /// when excluded).
    pub fn zero_score_value(&self, i: usize) -> f64 {
        if self.excluded[i] {
            return self.vmax[i];
        }
        match &self.reserves {
            Some(r) => r[i],
            None => self.alphas[i] / self.betas[i],
        }
    }

    /// Bidder `i`'s score at value `x`.
    pub fn score(&self, i: usize, x: f64) -> Result<f64> {
        if self.excluded[i] {
            return Err(Error::Domain(format!("bidder {} is excluded", i + 1)));
        }
        if !(x >= 0.0 && x <= self.vmax[i]) {
            return Err(Error::Domain(format!("value {x} outside the support of bidder {}", i + 1)));
        }
        Ok(self.raw_score(i, x))
    }

    fn raw_score(&self, i: usize, x: f64) -> f64 {
        match &self.reserves {
            Some(r) => (x - r[i]) / (self.vmax[i] - r[i]),
            None => self.betas[i] * x - self.alphas[i],
        }
    }

    /// Value at which bidder `i` reaches score `s` (not clamped).
    fn value_for_score(&self, i: usize, s: f64) -> f64 {
        match &self.reserves {
            Some(r) => r[i] + (self.vmax[i] - r[i]) * s,
            None => (self.alphas[i] + s) / self.betas[i],
        }
    }

    /// Largest rival score, floored at 0.
    fn rival_max(&self, i: usize, v: &[f64]) -> f64 {
        (0..v.len())
            .filter(|&j| j != i && !self.excluded[j])
            .map(|j| self.raw_score(j, v[j]))
            .fold(0.0, f64::max)
    }

    /// Winner at `v`: highest score among included bidders provided it is
    /// nonnegative; ties go to the lowest index.
    pub fn allocate(&self, v: &[f64]) -> Option<usize> {
        let scores: Vec<Option<f64>> = (0..v.len())
            .map(|i| (!self.excluded[i]).then(|| self.raw_score(i, v[i])))
            .collect();
        let top = scores.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(top >= -SCORE_TIE) {
            return None;
        }
        scores.iter().position(|s| matches!(s, Some(x) if *x >= top - SCORE_TIE))
    }

    /// Payment vector at `v`: the winner pays her threshold.
    pub fn payments(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        if let Some(w) = self.allocate(v) {
            out[w] = self.threshold(w, v);
        }
        out
    }

    /// Total revenue at `v`.
    pub fn revenue(&self, v: &[f64]) -> f64 {
        self.payments(v).iter().sum()
    }

    /// Values that make the grid-based revenue computations exact for this
    /// auction: 0, the zero-score values, the upper bounds and every value
    /// at which one bidder's score equals another's score at a listed node.
    pub fn breakpoints(&self, rounds: usize) -> Vec<Vec<f64>> {
        let n = self.vmax.len();
        let mut coords: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut c = vec![0.0, self.vmax[i]];
                let z = self.zero_score_value(i);
                if z > 0.0 && z < self.vmax[i] {
                    c.push(z);
                }
                c
            })
            .collect();
        for _ in 0..rounds {
            let snapshot = coords.clone();
            let mut added = false;
            for i in (0..n).filter(|&i| !self.excluded[i]) {
                for j in (0..n).filter(|&j| j != i && !self.excluded[j]) {
                    for &x in &snapshot[j] {
                        let y = self.value_for_score(i, self.raw_score(j, x));
                        if y > 0.0
                            && y < self.vmax[i]
                            && !coords[i].iter().any(|c| (c - y).abs() <= 1e-12)
                        {
                            coords[i].push(y);
                            added = true;
                        }
                    }
                }
            }
            if !added {
                break;
            }
        }
        for c in &mut coords {
            c.sort_by(f64::total_cmp);
        }
        coords
    }
}

impl Thresholds for LinearScoreAuction {
    fn bidders(&self) -> usize {
        self.vmax.len()
    }

    fn vmax(&self) -> &[f64] {
        &self.vmax
    }

    fn threshold(&self, i: usize, v: &[f64]) -> f64 {
        if self.excluded[i] {
            return self.vmax[i];
        }
        let s = self.rival_max(i, v);
        self.value_for_score(i, s).clamp(0.0, self.vmax[i])
    }

    /// Selling to `i` is admissible exactly when her score is weakly the
    /// highest and nonnegative. This differs from `v_i ≥ p_i` only where the
    /// threshold is clamped at `v̄_i`, which matters for unequal bounds.
    fn can_serve(&self, i: usize, v: &[f64]) -> bool {
        if self.excluded[i] {
            return false;
        }
        let own = self.raw_score(i, v[i]);
        own >= self.rival_max(i, v) - NODE_TOL * self.betas[i].max(1.0)
    }

    fn no_sale_limit(&self, v: &[f64]) -> bool {
        (0..v.len()).filter(|&i| !self.excluded[i]).all(|i| {
            let z = self.zero_score_value(i);
            z > 0.0 && v[i] <= z + NODE_TOL
        })
    }
}
