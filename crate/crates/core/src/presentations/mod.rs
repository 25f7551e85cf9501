//! Bounded presentations: triangle presentations, the defining-subset
//! probe, quotient and extension combinators, and the factorial
//! obstruction.

mod combinators;
mod factorial;
mod probe;
mod word;

pub use combinators::{
    extension_relators, power_generating_set, quotient_relators, relators_hold_in_window, triangle_presentation,
    verify_finite_presentation, ExtensionData, FiniteVerification,
};
pub use factorial::{factorial_certificate, LatticeObstruction};
pub use probe::{
    chordless_loops, cocycle_basis, contract_in_cayley_complex, defining_subset_probe, CocycleCertificate,
    DefiningProbeReport, FailCertificate, ProbeVerdict,
};
pub use word::{
    cyclically_reduce, free_reduce_word, inverse_word, normalize_relator, Evaluation, Letter, Presentation, Word,
};
