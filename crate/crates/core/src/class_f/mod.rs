//! Class F: states whose leading eigenvector has a multiplicity-free
//! coefficient matrix.

pub mod decide;
pub mod gauge;
pub mod invariants;
pub mod phases;
pub mod sigma;
pub mod witness;

pub use decide::{decide_equivalence_f, decide_equivalence_f_supplied, DecideOptions};
pub use gauge::{prepare_f, prepare_f_with, PhaseGauge, PreparedF};
pub use invariants::{compare_invariants_f, compute_invariants_f, DiffReport, InvariantSetF};
pub use phases::{solve_graph, solve_phases, solve_torus, PhaseAssignment, PhaseProblem};
pub use sigma::{SigmaIndex, SigmaOptions, SigmaRule};
pub use witness::build_witness;
