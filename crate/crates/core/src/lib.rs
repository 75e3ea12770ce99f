//! Verification workbench for four-qubit bound entanglement.
//!
//! The library builds the noisy Smolin state family, certifies its PPT
//! structure across all bipartite cuts, evaluates and maximizes two-setting
//! correlation Bell inequalities, and reproduces the associated
//! communication-complexity advantage both exactly and by seeded Monte Carlo
//! simulation.

pub mod bell;
pub mod commsim;
pub mod error;
pub mod linalg;
pub mod separability;
pub mod states;

pub use error::{Error, Result};
