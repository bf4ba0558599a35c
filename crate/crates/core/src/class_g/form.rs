//! Recognising the projector-pair form.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermiticity_residual, select_columns, trace};
use crate::scalar::{conj, to_f64, unit_phase, ComplexMatrix, Real};
use crate::state::EigenEnsemble;
use crate::tolerance::Tolerances;

/// Two-level description of one coefficient matrix:
/// `A = hi·P + lo·(1 − P)` with `hi > lo ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoLevel<T: Real> {
    pub hi: T,
    pub lo: T,
    /// Projector onto the `hi` eigenspace.
    pub proj: ComplexMatrix<T>,
    pub rank: usize,
}

impl<T: Real> TwoLevel<T> {
    /// Weight `hi / (hi + lo)` of the projector in the normalised form
    /// `p·P + (1 − p)(1 − P)`.
    pub fn weight(&self) -> T {
        self.hi / (self.hi + self.lo)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorPairForm<T: Real> {
    pub n: usize,
    pub mu: [T; 2],
    pub a0: TwoLevel<T>,
    pub a1: TwoLevel<T>,
    /// Coefficient matrices with the phase making their traces positive.
    pub coeff_mats: [ComplexMatrix<T>; 2],
}

impl<T: Real> ProjectorPairForm<T> {
    pub fn p(&self) -> T {
        self.a0.weight()
    }

    pub fn q(&self) -> T {
        self.a1.weight()
    }

    pub fn p_proj(&self) -> &ComplexMatrix<T> {
        &self.a0.proj
    }

    pub fn q_proj(&self) -> &ComplexMatrix<T> {
        &self.a1.proj
    }
}

pub fn detect_class_g<T: Real>(ensemble: &EigenEnsemble<T>, tol: &Tolerances<T>) -> Result<ProjectorPairForm<T>> {
    if ensemble.rank() != 2 {
        return Err(Error::NotRankTwo(ensemble.rank()));
    }
    let (left, right) = ensemble.dims();
    if left != right {
        return Err(Error::BadDimension(format!("class G needs an n x n system, got {left}x{right}")));
    }
    let mats = ensemble.coeff_mats();
    let a0 = fix_phase(&mats[0]);
    let a1 = fix_phase(&mats[1]);
    let l0 = two_level(&a0, "A0", tol)?;
    let l1 = two_level(&a1, "A1", tol)?;
    Ok(ProjectorPairForm { n: left, mu: [ensemble.mus()[0], ensemble.mus()[1]], a0: l0, a1: l1, coeff_mats: [a0, a1] })
}

fn fix_phase<T: Real>(a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let ph = conj(unit_phase(trace(a)));
    a.map(|z| z * ph)
}

/// Splits a Hermitian PSD matrix into its two eigenvalue levels.
pub fn two_level<T: Real>(a: &ComplexMatrix<T>, name: &str, tol: &Tolerances<T>) -> Result<TwoLevel<T>> {
    let h = hermiticity_residual(a);
    if h > tol.eq {
        return Err(Error::NotProjectorForm(format!("{name} is not Hermitian (residual {:.3e})", to_f64(h))));
    }
    let sym = (a + a.adjoint()).map(|z| z * crate::scalar::creal(crate::scalar::lit(0.5)));
    let (vals, vecs) = hermitian_eigen(&sym);
    if let Some(&min) = vals.last() {
        if min < -tol.eq {
            return Err(Error::NotProjectorForm(format!("{name} has negative eigenvalue {:.3e}", to_f64(min))));
        }
    }
    let mut levels: Vec<Vec<usize>> = Vec::new();
    for k in 0..vals.len() {
        match levels.last_mut() {
            Some(g) if vals[*g.last().unwrap()] - vals[k] <= tol.gap => g.push(k),
            _ => levels.push(vec![k]),
        }
    }
    match levels.len() {
        1 => Err(Error::AmbiguousForm(format!("{name} is a multiple of the identity"))),
        2 => {
            let mean = |g: &[usize]| g.iter().fold(T::zero(), |s, &k| s + vals[k]) / crate::scalar::lit(g.len() as f64);
            let hi = mean(&levels[0]);
            let lo = mean(&levels[1]).max(T::zero());
            let x = select_columns(&vecs, &levels[0]);
            Ok(TwoLevel { hi, lo, proj: &x * x.adjoint(), rank: levels[0].len() })
        }
        k => Err(Error::NotProjectorForm(format!("{name} has {k} distinct eigenvalues"))),
    }
}
