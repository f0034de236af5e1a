//! Sampled checkers for the standing assumptions, growth conditions and equivalences.
//!
//! "Almost every x" becomes "every sampled x": each report carries the lattice it
//! was computed on so a failure can be replayed.

mod assumptions;
mod equivalence;
mod growth;
mod lemmas;
mod report;
mod sample;
mod search;

pub use assumptions::{check_a0, check_a1, check_a1prime, check_a2, INEQUALITY_SLACK};
pub use equivalence::{check_equivalence, check_weak_equivalence};
pub use growth::{check_adec, check_ainc, check_ainc_curve};
pub use lemmas::{lemma24_backward, lemma24_forward, lemma25_enlarge, Enlarge};
pub use report::{Condition, ConditionReport, Witness};
pub use sample::{log_grid, BallSampling, SampleSpec, TInterval};
pub use search::{largest_passing, least_passing};
