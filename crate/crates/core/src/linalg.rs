//! Small dense linear algebra on row-major `Vec<Vec<f64>>` matrices.

/// Solves `a x = b` for square `a` by Gaussian elimination with partial
/// pivoting. Returns `None` when a pivot falls below `tol`.
pub fn solve(a: &[Vec<f64>], b: &[f64], tol: f64) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < tol {
            return None;
        }
        m.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            if f != 0.0 {
                for k in col..=n {
                    m[row][k] -= f * m[col][k];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| m[i][k] * x[k]).sum();
        x[i] = (m[i][n] - s) / m[i][i];
    }
    Some(x)
}

/// Determinant by elimination with partial pivoting.
pub fn determinant(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            m.swap(col, piv);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for k in col..n {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    det
}

/// Inverse by solving against the unit vectors.
pub fn inverse(a: &[Vec<f64>], tol: f64) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        cols.push(solve(a, &e, tol)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect())
}

/// Solves a possibly rectangular system `a x = b` (rows ≥ columns) when it
/// has a unique exact solution. Returns `None` if the columns are linearly
/// dependent or the system is inconsistent beyond `tol`.
pub fn solve_unique(a: &[Vec<f64>], b: &[f64], tol: f64) -> Option<Vec<f64>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    if rows < cols {
        return None;
    }
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    for col in 0..cols {
        let piv = (col..rows).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < tol {
            return None;
        }
        m.swap(col, piv);
        for row in 0..rows {
            if row != col {
                let f = m[row][col] / m[col][col];
                if f != 0.0 {
                    for k in col..=cols {
                        m[row][k] -= f * m[col][k];
                    }
                }
            }
        }
    }
    if m[cols..].iter().any(|r| r[cols].abs() > tol) {
        return None;
    }
    Some((0..cols).map(|i| m[i][cols] / m[i][i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_two_by_two() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x = solve(&a, &[3.0, 5.0], 1e-12).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
    }

    #[test]
    fn singular_is_rejected() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve(&a, &[1.0, 2.0], 1e-12).is_none());
        assert_eq!(determinant(&a), 0.0);
    }

    #[test]
    fn inverse_round_trip() {
        let a = vec![vec![1.0, -0.5, 0.0], vec![-0.2, 1.0, -0.3], vec![0.0, -0.4, 1.0]];
        let inv = inverse(&a, 1e-12).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let s: f64 = (0..3).map(|k| a[i][k] * inv[k][j]).sum();
                assert!((s - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rectangular_consistency() {
        let a = vec![vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]];
        assert_eq!(solve_unique(&a, &[1.0, 0.25, 0.75], 1e-12).unwrap(), vec![0.75, 0.25]);
        assert!(solve_unique(&a, &[1.0, 0.25, 0.5], 1e-12).is_none());
    }
}
