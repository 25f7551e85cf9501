//! Coarse connectivity, coarse simple connectivity and their transfer along
//! quasi-isometries and coverings.

mod covering;
mod filtration;
mod loops;
mod probe;
mod qi;

pub use covering::*;
pub use filtration::*;
pub use loops::*;
pub use probe::*;
pub use qi::*;
