use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Problem data: bidder means and support upper bounds.
///
/// Bidders are indexed from 0 in code; documentation and reports number
/// them from 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    means: Vec<f64>,
    vmax: Vec<f64>,
}

impl Instance {
    pub fn new(means: Vec<f64>, vmax: Vec<f64>) -> Result<Self> {
        if means.len() != vmax.len() {
            return Err(Error::InvalidInstance(format!(
                "{} means but {} upper bounds",
                means.len(),
                vmax.len()
            )));
        }
        if means.len() < 2 {
            return Err(Error::InvalidInstance("at least two bidders are required".into()));
        }
        for (i, (&m, &h)) in means.iter().zip(&vmax).enumerate() {
            if !m.is_finite() || !h.is_finite() {
                return Err(Error::InvalidInstance(format!("bidder {}: non-finite data", i + 1)));
            }
            if !(m > 0.0 && m < h) {
                return Err(Error::InvalidInstance(format!(
                    "bidder {}: need 0 < mean < upper bound, got mean {m} and bound {h}",
                    i + 1
                )));
            }
        }
        Ok(Self { means, vmax })
    }

    /// All bidders share the upper bound `vmax`.
    pub fn symmetric_bounds(means: Vec<f64>, vmax: f64) -> Result<Self> {
        let n = means.len();
        Self::new(means, vec![vmax; n])
    }

    pub fn n(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn vmax(&self) -> &[f64] {
        &self.vmax
    }

    /// The common upper bound, if all bounds coincide.
    pub fn common_vmax(&self) -> Option<f64> {
        let h = self.vmax[0];
        self.vmax.iter().all(|&x| x == h).then_some(h)
    }

    pub(crate) fn require_common_vmax(&self) -> Result<f64> {
        self.common_vmax()
            .ok_or_else(|| Error::Domain("operation requires equal upper bounds".into()))
    }

    pub(crate) fn require_two(&self) -> Result<()> {
        if self.n() == 2 {
            Ok(())
        } else {
            Err(Error::Domain(format!("operation requires two bidders, got {}", self.n())))
        }
    }
}
