//! Rank-two mixtures of d-computable pure states on 4 x 4.
//!
//! The coefficient matrix of each pure state has the block form
//! `[[0, M], [M, 0]]` with `M = [[a1, b1], [conj(b1), d1]]` nonnegative.
//! Left multiplication by the block swap `T` turns it into `I_2 ⊗ M`, so
//! the mixture lies in class G after the local change of frame `T ⊗ I_4`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{hs_inner, identity};
use crate::scalar::{conj, creal, lit, modulus, to_f64, ComplexMatrix, Real};
use crate::state::{DensityMatrix, EigenEnsemble, LocalUnitaryPair};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DComputableParams<T: Real> {
    pub a1: T,
    pub b1: Complex<T>,
    pub d1: T,
}

impl<T: Real> DComputableParams<T> {
    /// `M = x x* / √2` for a unit vector `x`, the normalised rank-one case.
    pub fn rank_one(x: [Complex<T>; 2]) -> Self {
        let s = T::one() / lit::<T>(2.0).sqrt();
        Self {
            a1: (x[0] * conj(x[0])).re * s,
            b1: x[0] * conj(x[1]) * creal(s),
            d1: (x[1] * conj(x[1])).re * s,
        }
    }

    /// Generalized concurrence `4 (a1 d1 − |b1|²)`.
    pub fn concurrence(&self) -> T {
        lit::<T>(4.0) * (self.a1 * self.d1 - modulus(self.b1) * modulus(self.b1))
    }

    pub fn coeff_matrix(&self) -> ComplexMatrix<T> {
        let z = creal(T::zero());
        let (a, b, bb, d) = (creal(self.a1), self.b1, conj(self.b1), creal(self.d1));
        ComplexMatrix::from_row_slice(4, 4, &[z, z, a, b, z, z, bb, d, a, b, z, z, bb, d, z, z])
    }

    fn validate(&self, tol: &Tolerances<T>) -> Result<()> {
        let b2 = modulus(self.b1) * modulus(self.b1);
        if self.a1 < -tol.eq || self.d1 < -tol.eq {
            return Err(Error::ParamConstraintViolated("a1 and d1 must be nonnegative".into()));
        }
        if self.a1 * self.d1 < b2 - tol.eq {
            return Err(Error::ParamConstraintViolated(format!(
                "a1*d1 = {:.3e} < |b1|^2 = {:.3e}",
                to_f64(self.a1 * self.d1),
                to_f64(b2)
            )));
        }
        let norm = lit::<T>(2.0) * (self.a1 * self.a1 + lit::<T>(2.0) * b2 + self.d1 * self.d1);
        if (norm - T::one()).abs() > tol.eq {
            return Err(Error::ParamConstraintViolated(format!("squared norm is {:.6}", to_f64(norm))));
        }
        Ok(())
    }
}

/// `T ⊗ I_4` with `T` the 2 x 2 block swap.
pub fn swap_pair<T: Real>() -> LocalUnitaryPair<T> {
    let t = ComplexMatrix::from_fn(4, 4, |i, j| if (i + 2) % 4 == j { creal(T::one()) } else { creal(T::zero()) });
    LocalUnitaryPair { u: t, v: identity(4) }
}

/// `μ|ψ⟩⟨ψ| + (1 − μ)|ψ'⟩⟨ψ'|` together with the frame change `W`.
pub fn d_computable_fixture<T: Real>(
    first: &DComputableParams<T>,
    second: &DComputableParams<T>,
    mu: T,
    tol: &Tolerances<T>,
) -> Result<(DensityMatrix<T>, LocalUnitaryPair<T>)> {
    first.validate(tol)?;
    second.validate(tol)?;
    if mu <= T::zero() || mu >= T::one() {
        return Err(Error::ParamConstraintViolated(format!("mu = {} outside (0, 1)", to_f64(mu))));
    }
    let (a, b) = (first.coeff_matrix(), second.coeff_matrix());
    let overlap = modulus(hs_inner(&b, &a));
    if overlap > tol.eq {
        return Err(Error::NotOrthogonal(to_f64(overlap)));
    }
    let ens = EigenEnsemble::from_parts(vec![mu, T::one() - mu], vec![a, b], tol)?;
    Ok((ens.to_density(), swap_pair()))
}
