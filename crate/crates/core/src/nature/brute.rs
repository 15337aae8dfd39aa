use super::RevenueTable;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::linalg::solve_unique;

/// Largest number of candidate supports the oracle will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

fn choose(n: usize, k: usize) -> u128 {
    let mut c: u128 = 1;
    for j in 0..k {
        c = c * (n - j) as u128 / (j + 1) as u128;
    }
    c
}

/// Minimum expected revenue over all distributions supported on at most
/// `n + 1` grid nodes, by enumerating supports and solving the mean
/// constraints on each. Independent of the simplex code.
pub fn brute_force_min(table: &RevenueTable, instance: &Instance) -> Result<f64> {
    let n = instance.n();
    let nodes = table.nodes();
    let total: u128 = (1..=n + 1).map(|k| choose(nodes.len(), k)).sum();
    if total > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { count: total, limit: BRUTE_FORCE_LIMIT });
    }
    let mut rhs = vec![1.0];
    rhs.extend_from_slice(instance.means());
    let mut best = f64::INFINITY;
    for k in 1..=n + 1 {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let a: Vec<Vec<f64>> = (0..=n)
                .map(|row| {
                    idx.iter()
                        .map(|&j| if row == 0 { 1.0 } else { nodes[j][row - 1] })
                        .collect()
                })
                .collect();
            if let Some(f) = solve_unique(&a, &rhs, 1e-12) {
                if f.iter().all(|&p| p >= -1e-12) {
                    let val: f64 = idx.iter().zip(&f).map(|(&j, p)| p * table.values()[j]).sum();
                    best = best.min(val);
                }
            }
            if !next_combination(&mut idx, nodes.len()) {
                break;
            }
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::MomentInfeasible)
    }
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
