//! Max-min revenue auctions when only the bidders' mean values and upper
//! bounds are known.
//!
//! The seller picks a dominant-strategy mechanism, Nature then picks the
//! value distribution (any joint law on the box `[0, v̄]` matching the
//! means) that minimizes expected revenue. This crate provides
//!
//! * [`LinearScoreAuction`] and tabulated [`GridMechanism`]s,
//! * Nature's problem as a linear program ([`nature`]),
//! * closed-form optimal reserves ([`solve`]),
//! * a constructive improvement of any feasible mechanism to a linear score
//!   auction with at least the same guarantee ([`improve`]),
//! * a membership test for the set of optimal mechanisms ([`optset`]).

pub mod auction;
pub mod dual;
mod error;
pub mod grid;
pub mod improve;
mod instance;
pub mod linalg;
pub mod nature;
pub mod optset;
pub mod solve;

pub use auction::{FeasibilityReport, GridMechanism, LinearScoreAuction, Thresholds};
pub use error::{Error, Result};
pub use grid::ProductGrid;
pub use instance::Instance;
pub use nature::{DiscreteDistribution, DualCertificate, RevenueTable, WorstCase, WorstCaseType};
