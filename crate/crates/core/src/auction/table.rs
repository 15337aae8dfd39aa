use serde::{Deserialize, Serialize};

use super::{closure, LinearScoreAuction, Thresholds, NODE_TOL};
use crate::error::{Error, Result};
use crate::grid::{MixedRadix, ProductGrid};

/// Threshold functions tabulated on a product grid and extended between
/// nodes by multilinear interpolation.
///
/// `tables[i]` lists `p_i` over the product of the other bidders'
/// coordinate lists in row-major order (rivals in increasing index, the
/// last rival varying fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMechanism {
    grid: ProductGrid,
    vmax: Vec<f64>,
    tables: Vec<Vec<f64>>,
}

/// Result of [`GridMechanism::check_feasible`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FeasibilityReport {
    Feasible,
    /// Two bidders strictly exceed their thresholds at `node`.
    Violation { node: Vec<f64>, bidders: (usize, usize) },
}

impl GridMechanism {
    pub fn new(coords: Vec<Vec<f64>>, tables: Vec<Vec<f64>>) -> Result<Self> {
        let vmax: Vec<f64> = coords.iter().map(|c| *c.last().unwrap_or(&0.0)).collect();
        let grid = ProductGrid::exact(coords, &vmax)?;
        let n = vmax.len();
        if n < 2 || tables.len() != n {
            return Err(Error::Domain("one threshold table per bidder is required".into()));
        }
        for i in 0..n {
            let expected: usize = (0..n).filter(|&j| j != i).map(|j| grid.axis(j).len()).product();
            if tables[i].len() != expected {
                return Err(Error::Domain(format!(
                    "bidder {}: table has {} entries, expected {expected}",
                    i + 1,
                    tables[i].len()
                )));
            }
            if tables[i].iter().any(|&p| !(p >= 0.0 && p <= vmax[i])) {
                return Err(Error::Domain(format!(
                    "bidder {}: thresholds must lie in [0, {}]",
                    i + 1,
                    vmax[i]
                )));
            }
        }
        Ok(Self { grid, vmax, tables })
    }

    /// Tabulates `f(i, v)` at every rival node (with `v_i = 0`), clamping
    /// into `[0, v̄_i]`.
    pub fn from_fn(grid: ProductGrid, mut f: impl FnMut(usize, &[f64]) -> f64) -> Self {
        let vmax: Vec<f64> = grid.coords().iter().map(|c| *c.last().unwrap()).collect();
        let n = vmax.len();
        let tables = (0..n)
            .map(|i| {
                rival_profiles(&grid, i)
                    .map(|v| f(i, &v).clamp(0.0, vmax[i]))
                    .collect()
            })
            .collect();
        Self { grid, vmax, tables }
    }

    /// Tabulates an auction's thresholds on the given grid.
    pub fn from_lsa(lsa: &LinearScoreAuction, grid: ProductGrid) -> Self {
        Self::from_fn(grid, |i, v| lsa.threshold(i, v))
    }

    pub fn grid(&self) -> &ProductGrid {
        &self.grid
    }

    pub fn coords(&self) -> &[Vec<f64>] {
        self.grid.coords()
    }

    pub fn tables(&self) -> &[Vec<f64>] {
        &self.tables
    }

    /// Rival profiles of bidder `i` in table order, with `v_i = 0`.
    pub fn rival_nodes(&self, i: usize) -> impl Iterator<Item = Vec<f64>> + '_ {
        rival_profiles(&self.grid, i)
    }

    /// Revenue at `v` under the lowest-index tie rule.
    pub fn revenue(&self, v: &[f64]) -> Result<f64> {
        let strict: Vec<usize> =
            (0..v.len()).filter(|&i| v[i] > self.threshold(i, v) + NODE_TOL).collect();
        if strict.len() > 1 {
            return Err(Error::Infeasible(format!(
                "bidders {} and {} both exceed their thresholds at {v:?}",
                strict[0] + 1,
                strict[1] + 1
            )));
        }
        Ok(super::outcome(self, v).map_or(0.0, |(_, p)| p))
    }

    /// Verifies the supply constraint at every grid node.
    pub fn check_feasible(&self) -> FeasibilityReport {
        self.check_feasible_on(&self.grid)
    }

    /// Verifies the supply constraint at every node of `grid`.
    pub fn check_feasible_on(&self, grid: &ProductGrid) -> FeasibilityReport {
        for v in grid.nodes() {
            let strict: Vec<usize> =
                (0..v.len()).filter(|&i| v[i] > self.threshold(i, &v) + NODE_TOL).collect();
            if strict.len() > 1 {
                return FeasibilityReport::Violation { node: v, bidders: (strict[0], strict[1]) };
            }
        }
        FeasibilityReport::Feasible
    }

    pub fn require_feasible(&self) -> Result<()> {
        match self.check_feasible() {
            FeasibilityReport::Feasible => Ok(()),
            FeasibilityReport::Violation { node, bidders } => Err(Error::Infeasible(format!(
                "bidders {} and {} both exceed their thresholds at {node:?}",
                bidders.0 + 1,
                bidders.1 + 1
            ))),
        }
    }

    /// Replaces bidder `i`'s table.
    pub fn with_table(&self, i: usize, table: Vec<f64>) -> Self {
        let mut out = self.clone();
        out.tables[i] = table;
        out
    }

    /// Table index and interpolation weights for bidder `i` at `v`.
    fn stencil(&self, i: usize, v: &[f64]) -> Vec<(usize, f64)> {
        let rivals: Vec<usize> = (0..v.len()).filter(|&j| j != i).collect();
        let mut cells = Vec::with_capacity(rivals.len());
        for &j in &rivals {
            let c = self.grid.axis(j);
            let x = v[j].clamp(c[0], *c.last().unwrap());
            let k = match c.partition_point(|&y| y <= x) {
                0 => 0,
                p if p >= c.len() => c.len() - 2,
                p => p - 1,
            };
            let t = (x - c[k]) / (c[k + 1] - c[k]);
            cells.push((k, t));
        }
        let radices: Vec<usize> = rivals.iter().map(|&j| self.grid.axis(j).len()).collect();
        let mut out = Vec::with_capacity(1 << rivals.len());
        for corner in MixedRadix::new(vec![2; rivals.len()]) {
            let mut w = 1.0;
            let mut idx = 0;
            for (pos, &bit) in corner.iter().enumerate() {
                let (k, t) = cells[pos];
                w *= if bit == 1 { t } else { 1.0 - t };
                idx = idx * radices[pos] + k + bit;
            }
            if w != 0.0 {
                out.push((idx, w));
            }
        }
        out
    }
}

fn rival_profiles(grid: &ProductGrid, i: usize) -> impl Iterator<Item = Vec<f64>> + '_ {
    let n = grid.dims();
    let rivals: Vec<usize> = (0..n).filter(|&j| j != i).collect();
    let radices = rivals.iter().map(|&j| grid.axis(j).len()).collect();
    MixedRadix::new(radices).map(move |idx| {
        let mut v = vec![0.0; n];
        for (pos, &j) in rivals.iter().enumerate() {
            v[j] = grid.axis(j)[idx[pos]];
        }
        v
    })
}

impl Thresholds for GridMechanism {
    fn bidders(&self) -> usize {
        self.vmax.len()
    }

    fn vmax(&self) -> &[f64] {
        &self.vmax
    }

    fn threshold(&self, i: usize, v: &[f64]) -> f64 {
        self.stencil(i, v).iter().map(|&(k, w)| w * self.tables[i][k]).sum()
    }

    fn no_sale_limit(&self, v: &[f64]) -> bool {
        closure::no_sale_limit(self, v, |i, v, j, up| self.one_sided_slope(i, v, j, up))
    }
}

impl GridMechanism {
    /// Slope of `p_i` along rival axis `j` at `v`, on the side of larger
    /// (`up`) or smaller values. Exact because interpolation is linear
    /// along each axis between nodes.
    fn one_sided_slope(&self, i: usize, v: &[f64], j: usize, up: bool) -> f64 {
        let c = self.grid.axis(j);
        let x = v[j];
        let nb = if up {
            c.iter().copied().find(|&y| y > x + 1e-13)
        } else {
            c.iter().rev().copied().find(|&y| y < x - 1e-13)
        };
        let Some(y) = nb else { return 0.0 };
        let mut w = v.to_vec();
        w[j] = y;
        (self.threshold(i, &w) - self.threshold(i, v)) / (y - x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_grid(extra: &[f64]) -> ProductGrid {
        ProductGrid::covering(vec![extra.to_vec(), extra.to_vec()], &[1.0, 1.0])
    }

    #[test]
    fn tabulates_lsa_rows() {
        let lsa = LinearScoreAuction::corner_hitting(&[0.4, 0.4], &[1.0, 1.0]).unwrap();
        let g = GridMechanism::from_lsa(&lsa, unit_grid(&[0.4]));
        assert_eq!(g.tables()[0], vec![0.4, 0.4, 1.0]);
        assert_eq!(g.check_feasible(), FeasibilityReport::Feasible);
    }

    #[test]
    fn spa_table_is_rival_value() {
        let lsa = LinearScoreAuction::corner_hitting(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let g = GridMechanism::from_lsa(&lsa, unit_grid(&[0.25, 0.5]));
        assert_eq!(g.tables()[1], vec![0.0, 0.25, 0.5, 1.0]);
        assert!((g.threshold(0, &[0.0, 0.3]) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn excluded_bidder_row_is_constant() {
        let lsa = LinearScoreAuction::corner_hitting(&[1.0, 0.2], &[1.0, 1.0]).unwrap();
        let g = GridMechanism::from_lsa(&lsa, unit_grid(&[0.5]));
        assert_eq!(g.tables()[0], vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn constant_low_thresholds_violate_supply() {
        let g = GridMechanism::new(
            vec![vec![0.0, 1.0], vec![0.0, 1.0]],
            vec![vec![0.2, 0.2], vec![0.3, 0.3]],
        )
        .unwrap();
        assert_eq!(
            g.check_feasible(),
            FeasibilityReport::Violation { node: vec![1.0, 1.0], bidders: (0, 1) }
        );
        assert!(g.revenue(&[1.0, 1.0]).is_err());
    }

    #[test]
    fn spa_with_reserve_is_feasible() {
        let grid = unit_grid(&[0.2, 0.4, 0.6, 0.8]);
        let g = GridMechanism::from_fn(grid, |i, v| v[1 - i].max(0.4));
        assert_eq!(g.check_feasible(), FeasibilityReport::Feasible);
    }

    #[test]
    fn multilinear_interpolation_in_three_dimensions() {
        let grid = ProductGrid::covering(vec![vec![], vec![], vec![]], &[1.0, 1.0, 1.0]);
        let g = GridMechanism::from_fn(grid, |i, v| {
            let r: Vec<f64> = (0..3).filter(|&j| j != i).map(|j| v[j]).collect();
            0.5 * r[0] * r[1] + 0.25 * r[0]
        });
        let p = g.threshold(0, &[0.0, 0.3, 0.6]);
        assert!((p - (0.5 * 0.18 + 0.075)).abs() < 1e-15);
    }

    #[test]
    fn revenue_uses_tie_rule() {
        let lsa = LinearScoreAuction::corner_hitting(&[0.45, 0.5], &[1.0, 1.0]).unwrap();
        let g = GridMechanism::from_lsa(&lsa, unit_grid(&[0.45, 0.5]));
        assert_eq!(g.revenue(&[0.45, 1.0]).unwrap(), 0.5);
        assert_eq!(g.revenue(&[0.1, 0.2]).unwrap(), 0.0);
    }
}
