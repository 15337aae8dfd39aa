//! CSV series for figures.

use maxmin::nature::{reserve_boundary, wcdistr2_classify};
use maxmin::solve::{optimal_lambda, optimal_reserves, regime, Regime, ReserveSet};
use maxmin::Instance;

const LATTICE: usize = 49;

/// Regime and number of weakly excluded bidders over a lattice of the
/// first two means; other means are taken from the instance.
pub fn regimes(inst: &Instance) -> maxmin::Result<String> {
    let h = inst.common_vmax().ok_or_else(|| {
        maxmin::Error::Domain("regime plot needs a common upper bound".into())
    })?;
    let mut out = String::from("m1,m2,regime,weakly_excluded\n");
    for a in 1..=LATTICE {
        for b in 1..=LATTICE {
            let mut m = inst.means().to_vec();
            m[0] = h * a as f64 / (LATTICE + 1) as f64;
            m[1] = h * b as f64 / (LATTICE + 1) as f64;
            let point = Instance::symmetric_bounds(m.clone(), h)?;
            let reg = match regime(&point)? {
                Regime::LowMeans => "low",
                Regime::HighMeans => "high",
            };
            let we = optimal_lambda(&point)?.weakly_excluded.len();
            out.push_str(&format!("{},{},{reg},{we}\n", m[0], m[1]));
        }
    }
    Ok(out)
}

/// Endpoints of the optimal reserve set.
pub fn reserve_set(inst: &Instance) -> maxmin::Result<String> {
    let sol = optimal_reserves(inst)?;
    let header: Vec<String> = (1..=inst.n()).map(|i| format!("r{i}")).collect();
    let mut out = format!("endpoint,{}\n", header.join(","));
    let row = |name: &str, r: &[f64]| {
        let vals: Vec<String> = r.iter().map(|x| x.to_string()).collect();
        format!("{name},{}\n", vals.join(","))
    };
    match sol.reserve_set {
        ReserveSet::Unique(r) => out.push_str(&row("unique", &r)),
        ReserveSet::Segment { lower_end, upper_end, .. } => {
            out.push_str(&row("lower", &lower_end));
            out.push_str(&row("upper", &upper_end));
        }
    }
    Ok(out)
}

/// The curve separating worst-case types I and II, the wall `r₂ = v̄ − r₁`
/// above which type III applies, and the classification on a lattice.
pub fn wc_types(inst: &Instance) -> maxmin::Result<String> {
    let h = inst.common_vmax().ok_or_else(|| {
        maxmin::Error::Domain("type plot needs a common upper bound".into())
    })?;
    if inst.n() != 2 {
        return Err(maxmin::Error::Domain("type plot needs two bidders".into()));
    }
    let m = inst.means();
    let mut out = String::from("r1,r2_boundary,r2_wall,types\n");
    for a in 0..=LATTICE {
        let r1 = m[0] * a as f64 / (LATTICE + 1) as f64;
        let rbar = reserve_boundary(r1, inst)?;
        let mut types = Vec::new();
        for b in 0..=LATTICE {
            let r2 = m[1] * b as f64 / (LATTICE + 1) as f64;
            types.push(match wcdistr2_classify(&[r1, r2], inst) {
                Ok(t) => format!("{t:?}"),
                Err(_) => "boundary".into(),
            });
        }
        out.push_str(&format!("{r1},{rbar},{},{}\n", h - r1, types.join(" ")));
    }
    Ok(out)
}
