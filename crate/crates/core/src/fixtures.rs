//! Closed-form example states.

use crate::scalar::{creal, lit, ComplexMatrix, ComplexVector, Real};
use crate::state::{coeff_to_vec, DensityMatrix, EigenEnsemble};
use crate::tolerance::Tolerances;

/// `(|01⟩ − |10⟩)/√2`.
pub fn psi_minus<T: Real>() -> ComplexVector<T> {
    let s = T::one() / lit::<T>(2.0).sqrt();
    let mut v = ComplexVector::zeros(4);
    v[1] = creal(s);
    v[2] = creal(-s);
    v
}

/// Werner state `(1−p) I/4 + p |Ψ−⟩⟨Ψ−|`.
pub fn werner_state<T: Real>(p: T) -> DensityMatrix<T> {
    let psi = psi_minus::<T>();
    let quarter: T = lit(0.25);
    let mat = ComplexMatrix::<T>::identity(4, 4).map(|z| z * creal((T::one() - p) * quarter))
        + (&psi * psi.adjoint()).map(|z| z * creal(p));
    DensityMatrix::from_trusted(mat, 2, 2)
}

/// The Werner decomposition in the textbook order
/// `ξ_0 = |00⟩, ξ_1 = |11⟩, ξ_2 = (|01⟩+|10⟩)/√2, ξ_3 = Ψ−`, marked as
/// caller-supplied (the first three weights coincide, so no eigensolver
/// would pick this basis on its own). Valid for `0 ≤ p < 1`.
pub fn werner_ensemble<T: Real>(p: T) -> EigenEnsemble<T> {
    let s = T::one() / lit::<T>(2.0).sqrt();
    let z = creal(T::zero());
    let one = creal(T::one());
    let a0 = ComplexMatrix::from_row_slice(2, 2, &[one, z, z, z]);
    let a1 = ComplexMatrix::from_row_slice(2, 2, &[z, z, z, one]);
    let a2 = ComplexMatrix::from_row_slice(2, 2, &[z, creal(s), creal(s), z]);
    let a3 = ComplexMatrix::from_row_slice(2, 2, &[z, creal(s), creal(-s), z]);
    let low = (T::one() - p) / lit(4.0);
    let high = (lit::<T>(3.0) * p + T::one()) / lit(4.0);
    EigenEnsemble::from_parts(vec![low, low, low, high], vec![a0, a1, a2, a3], &Tolerances::default())
        .expect("Werner decomposition is orthonormal")
}

/// `|ξ⟩⟨ξ|` for a coefficient matrix.
pub fn pure_state<T: Real>(a: &ComplexMatrix<T>) -> DensityMatrix<T> {
    let v = coeff_to_vec(a);
    let (l, r) = a.shape();
    DensityMatrix::from_trusted(&v * v.adjoint(), l, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius;

    #[test]
    fn werner_ensemble_rebuilds_state() {
        for p in [0.0, 0.3, 0.5, 0.9] {
            let ens = werner_ensemble::<f64>(p);
            assert!(ens.reconstruction_residual(&werner_state(p)) < 1e-14);
        }
    }

    #[test]
    fn werner_closed_form_entries() {
        let rho = werner_state::<f64>(0.5);
        let m = rho.matrix();
        assert!((m[(0, 0)].re - 0.125).abs() < 1e-15);
        assert!((m[(1, 1)].re - 0.375).abs() < 1e-15);
        assert!((m[(1, 2)].re + 0.25).abs() < 1e-15);
        assert!(frobenius(&(m - m.adjoint())) == 0.0);
    }
}
