//! Local-unitary equivalence of bipartite mixed states.
//!
//! Two states on `C^n ⊗ C^n` are LU-equivalent when
//! `ρ' = (U⊗V̄) ρ (U⊗V̄)*`. For states whose leading coefficient matrix has
//! distinct singular values ([`class_f`]) and for rank-two states built
//! from projector pairs ([`class_g`]) this crate computes complete
//! invariant sets, decides equivalence and returns an explicit witness
//! `(U, V)`. [`multipartite`] applies the bipartite deciders across cuts
//! and partial traces.
//!
//! The numerical core is generic over the real scalar ([`scalar::Real`]);
//! the aliases below fix it to `f64`, which is what the file formats
//! ([`io`]), the property suites ([`suite`]) and the CLI use.

pub mod class_f;
pub mod class_g;
pub mod decide;
pub mod error;
pub mod fixtures;
pub mod frame;
pub mod instances;
pub mod io;
pub mod linalg;
pub mod multipartite;
pub mod random;
pub mod scalar;
pub mod state;
pub mod suite;
pub mod tolerance;
pub mod verdict;

pub use decide::decide_auto;
pub use error::{Error, Result};
pub use verdict::{ClassTag, FirstDiff, Stage, Verdict};

pub type Complex64 = num_complex::Complex<f64>;
pub type ComplexMatrixF64 = scalar::ComplexMatrix<f64>;
pub type TolerancesF64 = tolerance::Tolerances<f64>;
pub type DensityMatrixF64 = state::DensityMatrix<f64>;
pub type EigenEnsembleF64 = state::EigenEnsemble<f64>;
pub type LocalUnitaryPairF64 = state::LocalUnitaryPair<f64>;
pub type SingularFrameF64 = frame::SingularFrame<f64>;
pub type InvariantSetFF64 = class_f::InvariantSetF<f64>;
pub type InvariantSetGF64 = class_g::InvariantSetG<f64>;
pub type ProjectorPairFormF64 = class_g::ProjectorPairForm<f64>;
pub type EquivalenceVerdictF64 = verdict::EquivalenceVerdict<f64>;
pub type MultipartiteStateF64 = multipartite::MultipartiteState<f64>;
