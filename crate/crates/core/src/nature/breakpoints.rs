//! Grids on which the revenue LP of a mechanism is exact, or as close to
//! exact as a product grid allows.

use crate::auction::{GridMechanism, LinearScoreAuction, Thresholds};
use crate::grid::ProductGrid;

/// Breakpoint grid of an auction: 0, zero-score values, upper bounds and
/// the values where scores cross at listed nodes.
pub fn auction_grid(lsa: &LinearScoreAuction) -> ProductGrid {
    ProductGrid::covering(lsa.breakpoints(4), lsa.vmax())
}

/// Evaluation grid of a tabulated mechanism: its own coordinates, `extra`,
/// and the threshold values `p_i` at every rival node. With two bidders the
/// crossings of the two threshold curves are added as well, which places
/// every vertex of the no-sale region on the grid.
pub fn mechanism_grid(mech: &GridMechanism, extra: &[Vec<f64>]) -> ProductGrid {
    let n = mech.bidders();
    let mut coords: Vec<Vec<f64>> = mech.coords().to_vec();
    for (c, e) in coords.iter_mut().zip(extra) {
        c.extend_from_slice(e);
    }
    for (i, axis) in coords.iter_mut().enumerate() {
        axis.extend(mech.tables()[i].iter().copied());
    }
    if n == 2 {
        for (x, y) in curve_crossings(mech) {
            coords[0].push(x);
            coords[1].push(y);
        }
    }
    ProductGrid::covering(coords, mech.vmax())
}

/// Points where `v1 = p1(v2)` meets `v2 = p2(v1)`.
fn curve_crossings(mech: &GridMechanism) -> Vec<(f64, f64)> {
    let c1 = mech.grid().axis(0);
    let c2 = mech.grid().axis(1);
    let t1 = &mech.tables()[0];
    let t2 = &mech.tables()[1];
    let mut out = Vec::new();
    for k in 0..c2.len() - 1 {
        // p1(v2) = a0 + a1 v2 on [c2[k], c2[k+1]]
        let a1 = (t1[k + 1] - t1[k]) / (c2[k + 1] - c2[k]);
        let a0 = t1[k] - a1 * c2[k];
        for l in 0..c1.len() - 1 {
            let b1 = (t2[l + 1] - t2[l]) / (c1[l + 1] - c1[l]);
            let b0 = t2[l] - b1 * c1[l];
            let den = 1.0 - a1 * b1;
            if den.abs() < 1e-14 {
                continue;
            }
            let x = (a0 + a1 * b0) / den;
            let y = b0 + b1 * x;
            let inside = |z: f64, lo: f64, hi: f64| z >= lo - 1e-12 && z <= hi + 1e-12;
            if inside(x, c1[l], c1[l + 1]) && inside(y, c2[k], c2[k + 1]) {
                out.push((x, y));
            }
        }
    }
    out
}
