//! Seeded generators shared by the integration tests.

#![allow(dead_code)]

use maxmin::solve::{optimal_reserves, Regime};
use maxmin::{FeasibilityReport, GridMechanism, Instance, LinearScoreAuction, ProductGrid};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit(n: usize) -> Vec<f64> {
    vec![1.0; n]
}

pub fn random_means(rng: &mut TestRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0.05..0.95)).collect()
}

pub fn random_instance(rng: &mut TestRng, n: usize) -> Instance {
    Instance::symmetric_bounds(random_means(rng, n), 1.0).unwrap()
}

/// Instance with two bidders in the requested regime.
pub fn instance_in_regime(rng: &mut TestRng, regime: Regime) -> Instance {
    loop {
        let inst = random_instance(rng, 2);
        if maxmin::solve::regime(&inst).unwrap() == regime {
            return inst;
        }
    }
}

/// Axis with `0`, `1` and `interior` random points.
fn random_axis(rng: &mut TestRng, interior: usize) -> Vec<f64> {
    (0..interior).map(|_| rng.gen_range(0.05..0.95)).collect()
}

/// A corner-hitting auction tabulated on a coarse random grid, with random
/// nonnegative bumps. Interpolating a convex threshold never undercuts
/// it and raising thresholds keeps the supply constraint, so the result is
/// feasible.
pub fn random_lsa_mechanism(rng: &mut TestRng, n: usize, interior: usize) -> GridMechanism {
    let r: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..0.8)).collect();
    let lsa = LinearScoreAuction::corner_hitting(&r, &unit(n)).unwrap();
    let coords = (0..n)
        .map(|i| {
            let mut c = random_axis(rng, interior);
            if rng.gen_bool(0.5) {
                c.push(r[i]);
            }
            c
        })
        .collect();
    let grid = ProductGrid::covering(coords, &unit(n));
    let bump_prob = rng.gen_range(0.0..0.5);
    let mut bumps = Vec::new();
    let base = GridMechanism::from_lsa(&lsa, grid.clone());
    for t in base.tables() {
        bumps.push(
            t.iter()
                .map(|_| if rng.gen_bool(bump_prob) { rng.gen_range(0.0..0.3) } else { 0.0 })
                .collect::<Vec<f64>>(),
        );
    }
    let tables = base
        .tables()
        .iter()
        .zip(&bumps)
        .map(|(t, b)| t.iter().zip(b).map(|(p, d)| (p + d).min(1.0)).collect())
        .collect();
    let mech = GridMechanism::new(grid.coords().to_vec(), tables).unwrap();
    assert_eq!(mech.check_feasible(), FeasibilityReport::Feasible);
    mech
}

/// Bidder 1 never wins; bidder 2 faces `r + k·v₁` (plus, with three
/// bidders, a second-price contest against bidder 3 above that floor).
pub fn excluded_bidder_mechanism(rng: &mut TestRng, n: usize) -> GridMechanism {
    let r = rng.gen_range(0.05..0.5);
    let k = rng.gen_range(0.05..0.6);
    let coords = (0..n)
        .map(|i| {
            let mut c = random_axis(rng, if n == 2 { 2 } else { 1 });
            if i > 0 {
                c.push(r);
            }
            c
        })
        .collect();
    let grid = ProductGrid::covering(coords, &unit(n));
    let mech = GridMechanism::from_fn(grid, |i, v| match i {
        0 => 1.0,
        1 if n == 2 => r + k * v[0],
        1 => (r + k * v[0]).max(v[2]),
        _ => v[1].max(r),
    });
    assert_eq!(mech.check_feasible(), FeasibilityReport::Feasible);
    mech
}

/// Either kind of random feasible mechanism.
pub fn random_feasible_mechanism(rng: &mut TestRng, n: usize) -> GridMechanism {
    if rng.gen_bool(0.25) {
        excluded_bidder_mechanism(rng, n)
    } else {
        random_lsa_mechanism(rng, n, if n == 2 { 3 } else { 1 })
    }
}

/// Piecewise-linear threshold of one bidder as a function of the rival's
/// value, given by sorted knots.
#[derive(Clone, Debug)]
pub struct Curve {
    pub knots: Vec<(f64, f64)>,
}

impl Curve {
    pub fn eval(&self, w: f64) -> f64 {
        let k = &self.knots;
        if w <= k[0].0 {
            return k[0].1;
        }
        for pair in k.windows(2) {
            let ((x0, y0), (x1, y1)) = (pair[0], pair[1]);
            if w <= x1 {
                return y0 + (y1 - y0) * (w - x0) / (x1 - x0);
            }
        }
        k[k.len() - 1].1
    }

    fn xs(&self) -> Vec<f64> {
        self.knots.iter().map(|k| k.0).collect()
    }
}

/// Two thresholds `p₁(v₂)`, `p₂(v₁)` and the grid tabulating them exactly.
#[derive(Clone, Debug)]
pub struct TwoBidderThresholds {
    pub curves: [Curve; 2],
}

impl TwoBidderThresholds {
    pub fn mechanism(&self) -> GridMechanism {
        // Bidder 1's curve lives on axis 2 and vice versa.
        let coords = vec![self.curves[1].xs(), self.curves[0].xs()];
        let grid = ProductGrid::covering(coords, &unit(2));
        GridMechanism::from_fn(grid, |i, v| self.curves[i].eval(v[1 - i]))
    }
}

/// A random mechanism in the optimal set: a monotone path from `r*` to
/// `(1, 1)` inside the admissible cone (the line itself with high means),
/// mutually inverse thresholds along it, and below the reserves one
/// bidder dipping between the two envelopes while the other stays between
/// her reserve and the upper envelope.
pub fn optimal_set_member(rng: &mut TestRng, inst: &Instance) -> TwoBidderThresholds {
    let sol = optimal_reserves(inst).unwrap();
    let (l, r) = (&sol.lambda_star, &sol.reserves);
    let (lo, hi) = match sol.regime {
        Regime::LowMeans => (l[0], 1.0 / l[1]),
        Regime::HighMeans => (l[0], l[0]),
    };
    let segments = rng.gen_range(1..=4);
    let mut xs: Vec<f64> = (0..segments - 1).map(|_| rng.gen_range(r[0]..1.0)).collect();
    xs.push(r[0]);
    xs.push(1.0);
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    let dx: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let avg = (1.0 - r[1]) / (1.0 - r[0]);
    let mut u: Vec<f64> = dx.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
    let shift = u.iter().zip(&dx).map(|(a, b)| a * b).sum::<f64>() / dx.iter().sum::<f64>();
    for x in &mut u {
        *x -= shift;
    }
    let mut alpha = f64::INFINITY;
    for &x in &u {
        if x > 0.0 {
            alpha = alpha.min((hi - avg) / x);
        } else if x < 0.0 {
            alpha = alpha.min((lo - avg) / x);
        }
    }
    let alpha = if alpha.is_finite() { alpha.max(0.0) * rng.gen_range(0.0..1.0) } else { 0.0 };
    let mut ys = vec![r[1]];
    for (k, d) in dx.iter().enumerate() {
        let y = ys[k] + (avg + alpha * u[k]) * d;
        ys.push(y);
    }
    *ys.last_mut().unwrap() = 1.0;
    let path: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();

    // p₂ over v₁ follows the path; p₁ over v₂ is its inverse.
    let mut p2: Vec<(f64, f64)> = path.clone();
    let mut p1: Vec<(f64, f64)> = path.iter().map(|&(x, y)| (y, x)).collect();

    let level = l[0] * r[0] + l[1] * r[1];
    let lower = |i: usize, w: f64| (r[i] + l[1 - i] * (w - r[1 - i])).max(0.0);
    let upper = |i: usize, w: f64| ((level - l[1 - i] * w) / l[i]).min(1.0);
    let dip = rng.gen_range(0..2);
    for i in 0..2 {
        let o = 1 - i;
        let mut ws: Vec<f64> = (0..rng.gen_range(0..3)).map(|_| rng.gen_range(0.0..r[o])).collect();
        ws.push(0.0);
        ws.sort_by(f64::total_cmp);
        ws.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
        ws.retain(|&w| w < r[o] - 1e-3 || w == 0.0);
        let knots = if i == 0 { &mut p1 } else { &mut p2 };
        let mut low: Vec<(f64, f64)> = ws
            .into_iter()
            .filter(|&w| w < r[o])
            .map(|w| {
                let floor = if i == dip { lower(i, w) } else { r[i] };
                let ceil = upper(i, w).max(floor);
                (w, floor + rng.gen_range(0.0..=1.0) * (ceil - floor))
            })
            .collect();
        low.extend(knots.iter().copied());
        *knots = low;
    }
    TwoBidderThresholds { curves: [Curve { knots: p1 }, Curve { knots: p2 }] }
}

/// A member with one threshold raised by a tent of height 0.05–0.15 on an
/// interval, either on the path above the reserves or, below them, past
/// the upper envelope.
pub fn near_miss(rng: &mut TestRng, inst: &Instance) -> TwoBidderThresholds {
    let sol = optimal_reserves(inst).unwrap();
    let (l, r) = (sol.lambda_star.clone(), sol.reserves.clone());
    loop {
        let base = optimal_set_member(rng, inst);
        let i = rng.gen_range(0..2);
        let o = 1 - i;
        let height = rng.gen_range(0.05..0.15);
        let on_path = rng.gen_bool(0.6) || r[o] < 0.05;
        let (a, b) = if on_path {
            let a = rng.gen_range(r[o]..(r[o] + 0.5 * (1.0 - r[o])));
            (a, (a + rng.gen_range(0.05..0.2)).min(0.999))
        } else {
            let a = rng.gen_range(0.0..r[o] * 0.5);
            (a, rng.gen_range((a + r[o]) * 0.5..r[o]))
        };
        let c = 0.5 * (a + b);
        let curve = &base.curves[i];
        let level = l[0] * r[0] + l[1] * r[1];
        let envelope = (level - l[o] * c) / l[i];
        let peak = if on_path { curve.eval(c) + height } else { envelope + height };
        let peak = peak.min(1.0);
        if peak - curve.eval(c) < 0.02 || (!on_path && peak - envelope < 0.02) {
            continue;
        }
        let mut knots: Vec<(f64, f64)> =
            curve.knots.iter().copied().filter(|k| k.0 <= a || k.0 >= b).collect();
        knots.push((a, curve.eval(a)));
        knots.push((c, peak));
        knots.push((b, curve.eval(b)));
        // Keep the original knots inside (a, b) under the raised tent.
        for &(x, y) in curve.knots.iter().filter(|k| k.0 > a && k.0 < b) {
            let tent = if x <= c {
                curve.eval(a) + (peak - curve.eval(a)) * (x - a) / (c - a)
            } else {
                curve.eval(b) + (peak - curve.eval(b)) * (b - x) / (b - c)
            };
            knots.push((x, y.max(tent)));
        }
        knots.sort_by(|p, q| p.0.total_cmp(&q.0));
        let mut out = base.clone();
        out.curves[i] = Curve { knots };
        return out;
    }
}
