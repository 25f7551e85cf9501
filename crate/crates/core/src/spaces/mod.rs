//! Finite pointed metric spaces: word-metric windows of groups, circles
//! and general tables.

mod circle;
mod family;
mod generators;
mod metric;
mod window;

pub use circle::{bridged_circles, circle_space, CircleSpace};
pub use family::{Elem, GroupFamily, Homomorphism};
pub use generators::GeneratingSet;
pub use metric::{CircleChart, FiniteMetricSpace, ScaledBound, SpaceJson};
pub use window::{build_window, group_subspace, word_ball, word_lengths_of, GroupWindow};
