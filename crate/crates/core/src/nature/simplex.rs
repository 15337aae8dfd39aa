//! Dense-tableau primal simplex for `min c·x  s.t.  A x = b, x ≥ 0`.
//!
//! Two phases with artificial variables, Bland's rule for both the entering
//! and the leaving variable. The tableau keeps the artificial columns to
//! the end so that `B⁻¹` and hence the row duals can be read off directly.

/// Entries smaller than this are never used as pivots.
pub const PIVOT_TOL: f64 = 1e-10;
const COST_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// One multiplier per equality row, with `c_j − yᵀA_j ≥ 0` at optimum.
    pub duals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.width
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                let f = row[c];
                if f != 0.0 {
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                    row[c] = 0.0;
                }
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.obj[c] = 0.0;
        }
        self.basis[r] = c;
    }

    fn set_objective(&mut self, cost: &[f64]) {
        let rhs = self.rhs();
        let mut obj = cost.to_vec();
        obj.push(0.0);
        for (row, &bv) in self.rows.iter().zip(&self.basis) {
            let cb = cost[bv];
            if cb != 0.0 {
                for j in 0..=rhs {
                    obj[j] -= cb * row[j];
                }
            }
        }
        self.obj = obj;
    }

    /// Runs Bland-rule iterations over columns `< allowed`. Returns false
    /// if the objective is unbounded below.
    fn optimize(&mut self, allowed: usize) -> bool {
        let rhs = self.rhs();
        loop {
            let Some(c) = (0..allowed).find(|&j| self.obj[j] < -COST_TOL) else {
                return true;
            };
            let mut best: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c] > PIVOT_TOL {
                    let ratio = row[rhs] / row[c];
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-15 * (1.0 + br.abs())
                                || (ratio <= br + 1e-15 * (1.0 + br.abs())
                                    && self.basis[i] < self.basis[bi])
                            {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }
}

/// Solves `min c·x` subject to `A x = b`, `x ≥ 0`.
pub fn solve_standard(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> LpOutcome {
    let m = b.len();
    let n = c.len();
    let width = n + m;
    let mut signs = vec![1.0; m];
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let s = if b[i] < 0.0 { -1.0 } else { 1.0 };
        signs[i] = s;
        let mut row = vec![0.0; width + 1];
        for j in 0..n {
            row[j] = s * a[i][j];
        }
        row[n + i] = 1.0;
        row[width] = s * b[i];
        rows.push(row);
    }
    let mut t = Tableau { rows, obj: Vec::new(), basis: (n..n + m).collect(), width };

    let mut phase1 = vec![0.0; width];
    for v in &mut phase1[n..] {
        *v = 1.0;
    }
    t.set_objective(&phase1);
    t.optimize(n);
    let scale = 1.0 + b.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if -t.obj[width] > 1e-9 * scale {
        return LpOutcome::Infeasible;
    }
    for r in 0..m {
        if t.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| t.rows[r][j].abs() > PIVOT_TOL) {
                t.pivot(r, j);
            }
        }
    }

    let mut phase2 = c.to_vec();
    phase2.extend(std::iter::repeat(0.0).take(m));
    t.set_objective(&phase2);
    if !t.optimize(n) {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![0.0; n];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        if bv < n {
            x[bv] = row[width].max(0.0);
        }
    }
    let objective = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    let duals = (0..m)
        .map(|k| {
            let y: f64 = t
                .rows
                .iter()
                .zip(&t.basis)
                .map(|(row, &bv)| phase2[bv] * row[n + k])
                .sum();
            y * signs[k]
        })
        .collect();
    LpOutcome::Optimal(LpSolution { x, objective, duals })
}
