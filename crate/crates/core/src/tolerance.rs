use crate::scalar::{lit, Real};

/// Numerical thresholds used across the pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Hermiticity, unit trace and PSD checks on input matrices.
    pub herm: T,
    /// Equality of invariants, residuals of witnesses.
    pub eq: T,
    /// Minimum separation of kept eigenvalues of rho; also the angular
    /// clustering tolerance on the unit circle for class G.
    pub gap: T,
    /// Eigenvalues of rho below this are dropped.
    pub rank_cut: T,
    /// Minimum separation of singular values of A0 (multiplicity freeness).
    pub sv_gap: T,
    /// Moduli at or below this count as zero.
    pub zero: T,
    /// Minimum modulus of a quantity used to pin an eigenvector phase.
    pub anchor: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            herm: lit(1e-10),
            eq: lit(1e-8),
            gap: lit(1e-6),
            rank_cut: lit(1e-10),
            sv_gap: lit(1e-6),
            zero: lit(1e-10),
            anchor: lit(1e-4),
        }
    }
}

impl<T: Real> Tolerances<T> {
    pub fn with_eq(mut self, eq: T) -> Self {
        self.eq = eq;
        self
    }
}
