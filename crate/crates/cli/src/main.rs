//! Command-line front end for the maxmin auction library.
//!
//! Exit status is 0 on success, 1 when the library rejects the input (a
//! JSON error object is written to standard error) and 2 when a file
//! cannot be read or parsed.

mod input;
mod output;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use maxmin::improve::dominating_lsa;
use maxmin::nature::{
    auction_grid, guarantee_on, lsa2_dual_multipliers, mechanism_grid, wcdistr2_classify,
    wcdistr2_construct,
};
use maxmin::optset::member;
use maxmin::solve::{asymmetric2_solve, optimal_reserves};
use maxmin::{Instance, ProductGrid, Thresholds};
use serde_json::json;

use input::Mechanism;

#[derive(Parser)]
#[command(name = "maxmin", version, about = "Maxmin-optimal auctions from means and bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal reserves, multipliers and revenue guarantee.
    Optimal { instance: PathBuf },
    /// Worst-case revenue of a mechanism.
    Evaluate {
        instance: PathBuf,
        mechanism: PathBuf,
        /// Spacing of the extra uniform grid used for tabulated mechanisms.
        #[arg(long)]
        grid_step: Option<f64>,
    },
    /// Worst-case distribution for two bidders and given reserves.
    WorstCase {
        instance: PathBuf,
        #[arg(long)]
        reserves: String,
    },
    /// Corner-hitting auction dominating a tabulated mechanism.
    Improve { instance: PathBuf, mechanism: PathBuf },
    /// Membership in the set of optimal mechanisms (two bidders).
    Member { instance: PathBuf, mechanism: PathBuf },
    /// CSV data for figures.
    PlotData {
        instance: PathBuf,
        #[arg(long, value_enum)]
        figure: Figure,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    Regimes,
    ReserveSet,
    WcTypes,
}

/// Either a rejected input (exit 1) or an I/O or parse failure (exit 2).
enum Failure {
    Domain(maxmin::Error),
    Io(anyhow::Error),
}

impl From<maxmin::Error> for Failure {
    fn from(e: maxmin::Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = std::result::Result<String, Failure>;

fn kind(e: &maxmin::Error) -> &'static str {
    use maxmin::Error::*;
    match e {
        InvalidInstance(_) => "invalid_instance",
        Domain(_) => "domain",
        Infeasible(_) => "infeasible",
        MomentInfeasible => "moment_infeasible",
        TooLarge { .. } => "too_large",
        Boundary(_) => "boundary",
        Regime(_) => "regime",
        Numerical(_) => "numerical",
    }
}

fn load_instance(path: &PathBuf) -> std::result::Result<Instance, Failure> {
    Ok(input::instance(path)??)
}

fn load_mechanism(path: &PathBuf, inst: &Instance) -> std::result::Result<Mechanism, Failure> {
    let mech = input::mechanism(path, inst)??;
    if mech_bidders(&mech) != inst.n() {
        return Err(maxmin::Error::InvalidInstance(
            "mechanism and instance have different numbers of bidders".into(),
        )
        .into());
    }
    Ok(mech)
}

fn mech_bidders(m: &Mechanism) -> usize {
    match m {
        Mechanism::Auction(a) => a.bidders(),
        Mechanism::Grid(g) => g.bidders(),
    }
}

fn optimal(path: &PathBuf) -> Outcome {
    let inst = load_instance(path)?;
    if inst.common_vmax().is_some() {
        Ok(output::to_json(&optimal_reserves(&inst)?)?)
    } else {
        let sol = asymmetric2_solve(&inst)?;
        let lsa = sol.auction(&inst)?;
        let mut v = serde_json::to_value(&sol).map_err(anyhow::Error::from)?;
        v["alphas"] = json!(lsa.alphas());
        v["betas"] = json!(lsa.betas());
        Ok(output::to_json(&v)?)
    }
}

fn evaluate(ipath: &PathBuf, mpath: &PathBuf, step: Option<f64>) -> Outcome {
    let inst = load_instance(ipath)?;
    let mech = load_mechanism(mpath, &inst)?;
    if let Some(h) = step {
        if !(h > 0.0 && h.is_finite()) {
            return Err(maxmin::Error::Domain("grid step must be positive".into()).into());
        }
    }
    let h_min = inst.vmax().iter().copied().fold(f64::INFINITY, f64::min);
    let wc = match &mech {
        Mechanism::Auction(lsa) => {
            let mut grid = auction_grid(lsa);
            if let Some(h) = step {
                grid = grid.with_extra(ProductGrid::uniform(inst.vmax(), h).coords());
            }
            guarantee_on(lsa, grid, &inst)?
        }
        Mechanism::Grid(g) => {
            g.require_feasible()?;
            let uniform = ProductGrid::uniform(inst.vmax(), step.unwrap_or(0.05 * h_min));
            guarantee_on(g, mechanism_grid(g, uniform.coords()), &inst)?
        }
    };
    Ok(output::to_json(&json!({
        "guarantee": wc.value,
        "lambda": wc.certificate.lambda,
        "lambda0": wc.certificate.lambda0,
        "dual_value": wc.certificate.value,
        "distribution": wc.distribution,
    }))?)
}

fn worst_case(ipath: &PathBuf, reserves: &str) -> Outcome {
    let inst = load_instance(ipath)?;
    let r = input::reserves(reserves)?;
    let ty = wcdistr2_classify(&r, &inst)?;
    let d = wcdistr2_construct(&r, &inst)?;
    let lambda = lsa2_dual_multipliers(&r, &inst)?;
    Ok(output::to_json(&json!({
        "type": ty,
        "atoms": d.atoms,
        "probs": d.probs,
        "lambda": lambda,
    }))?)
}

fn improve(ipath: &PathBuf, mpath: &PathBuf) -> Outcome {
    let inst = load_instance(ipath)?;
    let Mechanism::Grid(g) = load_mechanism(mpath, &inst)? else {
        return Err(maxmin::Error::Domain("improve expects a grid mechanism".into()).into());
    };
    let (lsa, audit) = dominating_lsa(&g, &inst)?;
    Ok(output::to_json(&json!({
        "reserves": lsa.reserves(),
        "alphas": lsa.alphas(),
        "betas": lsa.betas(),
        "audit": audit,
    }))?)
}

fn membership(ipath: &PathBuf, mpath: &PathBuf) -> Outcome {
    let inst = load_instance(ipath)?;
    let grid = match load_mechanism(mpath, &inst)? {
        Mechanism::Grid(g) => g,
        Mechanism::Auction(lsa) => {
            let grid = ProductGrid::covering(lsa.breakpoints(4), inst.vmax());
            maxmin::GridMechanism::from_lsa(&lsa, grid)
        }
    };
    Ok(output::to_json(&member(&grid, &inst)?)?)
}

fn plot_data(ipath: &PathBuf, figure: Figure) -> Outcome {
    let inst = load_instance(ipath)?;
    Ok(match figure {
        Figure::Regimes => plot::regimes(&inst)?,
        Figure::ReserveSet => plot::reserve_set(&inst)?,
        Figure::WcTypes => plot::wc_types(&inst)?,
    })
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Optimal { instance } => optimal(&instance),
        Command::Evaluate { instance, mechanism, grid_step } => {
            evaluate(&instance, &mechanism, grid_step)
        }
        Command::WorstCase { instance, reserves } => worst_case(&instance, &reserves),
        Command::Improve { instance, mechanism } => improve(&instance, &mechanism),
        Command::Member { instance, mechanism } => membership(&instance, &mechanism),
        Command::PlotData { instance, figure } => plot_data(&instance, figure),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            if text.ends_with('\n') {
                print!("{text}");
            } else {
                println!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(e)) => {
            let body = json!({"error": {"kind": kind(&e), "message": e.to_string()}});
            eprintln!("{}", output::to_json(&body).unwrap_or_else(|_| e.to_string()));
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
