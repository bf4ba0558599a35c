//! Class G: rank-two states whose two coefficient matrices are nonnegative
//! with at most two distinct eigenvalues, i.e. are fixed by a pair of
//! projectors.

pub mod dcomp;
pub mod decide;
pub mod form;
pub mod invariants;
pub mod pairform;

pub use dcomp::{d_computable_fixture, swap_pair, DComputableParams};
pub use decide::decide_equivalence_g;
pub use form::{detect_class_g, ProjectorPairForm};
pub use invariants::{compare_invariants_g, compute_invariants_g, InvariantSetG};
pub use pairform::{construct_unitary_pairform, pair_traces};
