//! Problem and mechanism files.

use anyhow::{Context, Result};
use maxmin::{GridMechanism, Instance, LinearScoreAuction};
use serde::Deserialize;
use std::path::Path;

/// Scalar bounds are broadcast to every bidder.
#[derive(Deserialize)]
#[serde(untagged)]
enum Bounds {
    Scalar(f64),
    List(Vec<f64>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    n: Option<usize>,
    vmax: Bounds,
    means: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum MechanismFile {
    CornerHitting { reserves: Vec<f64> },
    Lsa { alphas: Vec<f64>, betas: Vec<f64> },
    Grid { coords: Vec<Vec<f64>>, thresholds: Vec<Vec<f64>> },
}

/// Output of `optimal` read back as a mechanism.
#[derive(Deserialize)]
struct Untyped {
    alphas: Option<Vec<f64>>,
    betas: Option<Vec<f64>>,
    reserves: Option<Vec<f64>>,
}

pub enum Mechanism {
    Auction(LinearScoreAuction),
    Grid(GridMechanism),
}

fn read(path: &Path) -> Result<serde_json::Value> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Parsed instance; the inner result carries validation failures, which
/// are reported differently from unreadable files.
pub fn instance(path: &Path) -> Result<maxmin::Result<Instance>> {
    let file: InstanceFile = serde_json::from_value(read(path)?)
        .with_context(|| format!("parsing {}", path.display()))?;
    let vmax = match file.vmax {
        Bounds::Scalar(h) => vec![h; file.means.len()],
        Bounds::List(v) => v,
    };
    if let Some(n) = file.n {
        if n != file.means.len() {
            return Ok(Err(maxmin::Error::InvalidInstance(format!(
                "n = {n} but {} means given",
                file.means.len()
            ))));
        }
    }
    Ok(Instance::new(file.means, vmax))
}

pub fn mechanism(path: &Path, instance: &Instance) -> Result<maxmin::Result<Mechanism>> {
    let value = read(path)?;
    let vmax = instance.vmax().to_vec();
    let parsed = if value.get("type").is_some() {
        serde_json::from_value::<MechanismFile>(value)
            .with_context(|| format!("parsing {}", path.display()))?
    } else {
        let u: Untyped = serde_json::from_value(value)
            .with_context(|| format!("parsing {}", path.display()))?;
        match (u.alphas, u.betas, u.reserves) {
            (Some(alphas), Some(betas), _) => MechanismFile::Lsa { alphas, betas },
            (_, _, Some(reserves)) => MechanismFile::CornerHitting { reserves },
            _ => anyhow::bail!("{}: cannot tell the mechanism type", path.display()),
        }
    };
    Ok(match parsed {
        MechanismFile::CornerHitting { reserves } => {
            LinearScoreAuction::corner_hitting(&reserves, &vmax).map(Mechanism::Auction)
        }
        MechanismFile::Lsa { alphas, betas } => {
            LinearScoreAuction::new(alphas, betas, vmax).map(Mechanism::Auction)
        }
        MechanismFile::Grid { coords, thresholds } => {
            GridMechanism::new(coords, thresholds).and_then(|m| {
                if m.grid().coords().iter().map(|c| *c.last().unwrap()).collect::<Vec<_>>() == vmax {
                    Ok(Mechanism::Grid(m))
                } else {
                    Err(maxmin::Error::InvalidInstance(
                        "grid coordinates must end at the instance's upper bounds".into(),
                    ))
                }
            })
        }
    })
}

/// `r1,r2,...`
pub fn reserves(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad reserve {s:?}")))
        .collect()
}
