//! Product grids over the value box.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coordinates closer than this are merged when grids are built.
pub const MERGE_TOL: f64 = 1e-12;

/// A product of per-bidder coordinate lists, each sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductGrid {
    coords: Vec<Vec<f64>>,
}

impl ProductGrid {
    /// Builds a grid from arbitrary coordinate lists: sorts, merges near
    /// duplicates and drops values outside `[0, vmax_i]`. Both endpoints
    /// are always added.
    pub fn covering(mut coords: Vec<Vec<f64>>, vmax: &[f64]) -> Self {
        for (c, &h) in coords.iter_mut().zip(vmax) {
            c.push(0.0);
            c.push(h);
            c.retain(|x| x.is_finite() && *x >= 0.0 && *x <= h);
            *c = normalize(std::mem::take(c));
        }
        Self { coords }
    }

    /// Validates lists that must already be strictly increasing from 0 to
    /// `vmax_i`.
    pub fn exact(coords: Vec<Vec<f64>>, vmax: &[f64]) -> Result<Self> {
        if coords.len() != vmax.len() {
            return Err(Error::Domain("one coordinate list per bidder is required".into()));
        }
        for (i, (c, &h)) in coords.iter().zip(vmax).enumerate() {
            if c.len() < 2 || c[0] != 0.0 || *c.last().unwrap() != h {
                return Err(Error::Domain(format!(
                    "bidder {}: coordinates must run from 0 to {h}",
                    i + 1
                )));
            }
            if c.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::Domain(format!(
                    "bidder {}: coordinates must be strictly increasing",
                    i + 1
                )));
            }
        }
        Ok(Self { coords })
    }

    /// Uniform lists with the given step, plus the endpoints.
    pub fn uniform(vmax: &[f64], step: f64) -> Self {
        let coords = vmax
            .iter()
            .map(|&h| {
                let k = (h / step).round().max(1.0) as usize;
                (0..=k).map(|j| (j as f64 * step).min(h)).collect()
            })
            .collect();
        Self::covering(coords, vmax)
    }

    pub fn dims(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Vec<f64>] {
        &self.coords
    }

    pub fn axis(&self, i: usize) -> &[f64] {
        &self.coords[i]
    }

    pub fn len(&self) -> usize {
        self.coords.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Adds coordinates to one axis (merging near duplicates).
    pub fn with_extra(&self, extra: &[Vec<f64>]) -> Self {
        let coords = self
            .coords
            .iter()
            .zip(extra)
            .map(|(c, e)| {
                let mut all = c.clone();
                all.extend(e.iter().copied().filter(|x| *x >= c[0] && *x <= *c.last().unwrap()));
                normalize(all)
            })
            .collect();
        Self { coords }
    }

    /// True if every coordinate of `v` already appears on the matching axis.
    pub fn contains_point(&self, v: &[f64]) -> bool {
        v.iter()
            .zip(&self.coords)
            .all(|(x, c)| c.iter().any(|y| (x - y).abs() <= MERGE_TOL))
    }

    /// Iterates over all nodes in row-major order (last bidder fastest).
    pub fn nodes(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        MixedRadix::new(self.coords.iter().map(Vec::len).collect())
            .map(move |idx| idx.iter().enumerate().map(|(i, &k)| self.coords[i][k]).collect())
    }
}

fn normalize(mut c: Vec<f64>) -> Vec<f64> {
    c.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(c.len());
    for x in c {
        match out.last() {
            Some(&y) if (x - y).abs() <= MERGE_TOL * (1.0 + y.abs()) => {}
            _ => out.push(x),
        }
    }
    out
}

/// Iterator over multi-indices with per-position radices, last position
/// varying fastest.
#[derive(Debug, Clone)]
pub struct MixedRadix {
    radices: Vec<usize>,
    current: Option<Vec<usize>>,
}

impl MixedRadix {
    pub fn new(radices: Vec<usize>) -> Self {
        let current = if radices.iter().all(|&r| r > 0) {
            Some(vec![0; radices.len()])
        } else {
            None
        };
        Self { radices, current }
    }
}

impl Iterator for MixedRadix {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        let mut pos = next.len();
        loop {
            if pos == 0 {
                self.current = None;
                break;
            }
            pos -= 1;
            next[pos] += 1;
            if next[pos] < self.radices[pos] {
                self.current = Some(next);
                break;
            }
            next[pos] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covering_sorts_and_merges() {
        let g = ProductGrid::covering(vec![vec![0.5, 0.4, 0.4 + 1e-15, 2.0], vec![]], &[1.0, 1.0]);
        assert_eq!(g.axis(0), &[0.0, 0.4, 0.5, 1.0]);
        assert_eq!(g.axis(1), &[0.0, 1.0]);
        assert_eq!(g.len(), 8);
    }

    #[test]
    fn node_order_is_row_major() {
        let g = ProductGrid::covering(vec![vec![], vec![0.5]], &[1.0, 1.0]);
        let nodes: Vec<_> = g.nodes().collect();
        assert_eq!(nodes[0], vec![0.0, 0.0]);
        assert_eq!(nodes[1], vec![0.0, 0.5]);
        assert_eq!(nodes[3], vec![1.0, 0.0]);
        assert_eq!(nodes.len(), 6);
    }

    #[test]
    fn exact_rejects_unsorted() {
        assert!(ProductGrid::exact(vec![vec![0.0, 0.6, 0.5, 1.0], vec![0.0, 1.0]], &[1.0, 1.0]).is_err());
        assert!(ProductGrid::exact(vec![vec![0.1, 1.0], vec![0.0, 1.0]], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn uniform_hits_endpoints() {
        let g = ProductGrid::uniform(&[1.0, 2.0], 0.25);
        assert_eq!(g.axis(0).len(), 5);
        assert_eq!(*g.axis(1).last().unwrap(), 2.0);
    }
}
