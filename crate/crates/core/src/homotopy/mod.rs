//! Combinatorial paths, elementary homotopy moves and certificates.

mod filling;
mod path;
mod search;
mod winding;

pub use filling::{decompose_filling, free_reduce, verify_decomposition, FillingDecomposition, FillingFactor};
pub use path::{apply_move, apply_move_in_place, CombinatorialPath, HomotopyMove, MoveSequence, Regime};
pub use search::{contract_loop, BudgetReport, ContractionOutcome, Contractor, NegativeCertificate, SearchBudget};
pub use winding::{chart_winding, winding_number, WindingCertificate};
