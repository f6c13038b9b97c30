//! Solver and simulator for a business-cycle model in which producers and
//! consumers meet through a matching function and households value relative
//! wealth.
//!
//! Equilibrium tightness and output sit at the intersection of an aggregate
//! supply curve (output on the Beveridge curve) and an aggregate demand
//! curve (the wealth-in-utility Euler equation). Around that solver the
//! crate provides the efficient benchmark, sufficient-statistic and exact
//! optimal policy, comparative statics, and the model's out-of-equilibrium
//! ODEs. Time is measured in months and every rate is per month.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod curves;
pub mod dynamics;
pub mod efficiency;
pub mod equilibrium;
pub mod error;
pub mod matching;
pub mod ode;
pub mod output;
pub mod policy;
pub mod roots;
pub mod statics;

pub use curves::{EndowmentParams, PolicyParams, PreferenceParams};
pub use efficiency::EfficiencyReport;
pub use equilibrium::{solve, Equilibrium, ModelParams, DEFAULT_TOL};
pub use error::{ModelError, Result};
pub use matching::MatchingParams;
