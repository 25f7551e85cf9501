//! Executable combinatorics of coarse geometry of groups.
//!
//! Finite windows of word metrics, Rips 2-skeleta, r-homotopy of loops with
//! replayable certificates, bounded presentations, Schreier-type generators
//! for finite-index subgroups, quasi-isometry constant transfer and metric
//! coverings.

pub mod caps;
pub mod cli;
pub mod coarse;
pub mod error;
pub mod homotopy;
pub mod lattice;
pub mod presentations;
pub mod rational;
pub mod rips;
pub mod spaces;
pub mod subgroups;

pub use error::{Error, Result};
pub use rational::Rational;
