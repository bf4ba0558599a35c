use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bad dimension: {0}")]
    BadDimension(String),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("trace is {0}, expected 1")]
    TraceNotOne(f64),
    #[error("ensemble is inconsistent: {0}")]
    BadEnsemble(String),
    #[error("coefficient matrix A0 is not multiplicity free (min singular gap {0:.3e})")]
    NotMultiplicityFree(f64),
    #[error("perturbation eps={0} would reorder or collide singular values")]
    EpsTooLarge(f64),
    #[error("invariant sets have different local dimension ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("phase constraints are inconsistent (residual {0:.3e})")]
    InconsistentPhases(f64),
    #[error("witness construction failed verification (residual {0:.3e})")]
    ResidualTooLarge(f64),
    #[error("state is not rank two (rank {0})")]
    NotRankTwo(usize),
    #[error("coefficient matrices are not of projector form: {0}")]
    NotProjectorForm(String),
    #[error("projector form is ambiguous: {0}")]
    AmbiguousForm(String),
    #[error("projector pairs have different spectral data: {0}")]
    SpectrumMismatch(String),
    #[error("parameter constraint violated: {0}")]
    ParamConstraintViolated(String),
    #[error("pure states are not orthogonal (overlap {0:.3e})")]
    NotOrthogonal(f64),
    #[error("bad bipartition: {0}")]
    BadCut(String),
    #[error("index domain too large ({0} entries); pass allow_large to enumerate anyway")]
    DomainTooLarge(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
