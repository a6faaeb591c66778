#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod condensate;
pub mod eos;
pub mod estimation;
pub mod error;
pub mod gas_model;
pub mod interactions;
pub mod lattice_sums;
pub mod polylog;
mod roots;
mod special;
pub mod units;

pub use lattice_sums::{ModeCutoff, TailPolicy};
pub use eos::{classify_regime, solve_mu, Regime, RegimeReport};
pub use error::{Error, Result};
pub use gas_model::{Confinement, FisherMatrix2, GasSpec, Statistics, ThermoPoint};
pub use roots::SolveTrace;
pub use units::{Species, UnitSystem};
