//! Structured test instances: near-miss perturbations of class-F
//! ensembles, degenerate-`A_0` ensembles and rank-two states in both
//! classes.

use rand::Rng;

use crate::error::{Error, Result};
use crate::frame::{b_stack, svd_frame};
use crate::linalg::{diag_matrix, frobenius, hs_inner, scale_matrix};
use crate::random::{haar_unitary, random_spectrum, random_unit_vector};
use crate::scalar::{creal, lit, modulus, ComplexMatrix, Real};
use crate::state::EigenEnsemble;
use crate::tolerance::Tolerances;

/// Which invariant a [`perturb`] call disturbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Perturbation {
    /// Shifts `μ_0` and renormalises the weights.
    Spectrum,
    /// Shifts `λ_1` and renormalises `A_0`.
    SingularValue,
    /// Shifts the modulus of one off-diagonal entry of `B_1`.
    BModulus,
}

impl Perturbation {
    pub const ALL: [Perturbation; 3] = [Perturbation::Spectrum, Perturbation::SingularValue, Perturbation::BModulus];
}

/// Orthonormalises `mats[from..]` against everything before them, in order.
fn gram_schmidt<T: Real>(mats: &mut [ComplexMatrix<T>], from: usize) -> Result<()> {
    for k in from..mats.len() {
        let mut a = mats[k].clone();
        for prev in &mats[..k] {
            let ip = hs_inner(prev, &a);
            a -= scale_matrix(prev, ip);
        }
        let nrm = frobenius(&a);
        if nrm < lit(1e-8) {
            return Err(Error::BadEnsemble("re-orthonormalisation lost rank".into()));
        }
        mats[k] = a.map(|z| z / creal(nrm));
    }
    Ok(())
}

fn normalised<T: Real>(a: ComplexMatrix<T>) -> ComplexMatrix<T> {
    let nrm = frobenius(&a);
    a.map(|z| z / creal(nrm))
}

/// Moves one invariant of `ens` by `delta`, leaving earlier pipeline
/// stages untouched. The result is marked as computed, not supplied.
pub fn perturb<T: Real>(
    ens: &EigenEnsemble<T>,
    kind: Perturbation,
    delta: T,
    tol: &Tolerances<T>,
) -> Result<EigenEnsemble<T>> {
    match kind {
        Perturbation::Spectrum => {
            let mut mus = ens.mus().to_vec();
            mus[0] += delta;
            let total = mus.iter().fold(T::zero(), |a, &m| a + m);
            Ok(ens.with_mus(mus.iter().map(|&m| m / total).collect(), tol.gap))
        }
        Perturbation::SingularValue => {
            let frame = svd_frame(&ens.coeff_mats()[0], tol)?;
            let mut lambdas = frame.lambdas.clone();
            lambdas[0] += delta;
            let d = diag_matrix(&lambdas.iter().map(|&l| creal(l)).collect::<Vec<_>>());
            let mut mats = ens.coeff_mats().to_vec();
            mats[0] = normalised(&frame.psi * d * frame.eta.adjoint());
            gram_schmidt(&mut mats, 1)?;
            Ok(ens.with_coeff_mats(mats))
        }
        Perturbation::BModulus => {
            if ens.rank() < 2 {
                return Err(Error::Invalid("B-modulus perturbation needs rank at least 2".into()));
            }
            let frame = svd_frame(&ens.coeff_mats()[0], tol)?;
            let stack = b_stack(&frame, ens)?;
            let mut b1 = stack.mats[0].clone();
            let z = b1[(0, 1)];
            let r = modulus(z);
            b1[(0, 1)] = if r > tol.zero { z * creal((r + delta) / r) } else { creal(delta) };
            let mut mats = ens.coeff_mats().to_vec();
            mats[1] = normalised(&frame.psi * b1 * frame.eta.adjoint());
            // b_01 is off-diagonal, so A_1 stays orthogonal to A_0
            gram_schmidt(&mut mats, 2)?;
            Ok(ens.with_coeff_mats(mats))
        }
    }
}

/// Ensemble whose `A_0` has repeated singular values: at least one group
/// of size two or more, values separated by at least `0.1 / n` before
/// normalisation. Returns the ensemble and the largest group size.
pub fn degenerate_a0_ensemble<T: Real>(n: usize, rank: usize, rng: &mut impl Rng) -> (EigenEnsemble<T>, usize) {
    assert!(n >= 2 && rank >= 1 && rank <= n * n);
    // random composition of n with a part of size >= 2
    let mut sizes = Vec::new();
    let mut left = n;
    let first = rng.random_range(2..=n);
    sizes.push(first);
    left -= first;
    while left > 0 {
        let s = rng.random_range(1..=left);
        sizes.push(s);
        left -= s;
    }
    let zero_last = sizes.len() > 1 && rng.random_bool(0.3);
    let mut lambdas = Vec::with_capacity(n);
    let groups = sizes.len();
    for (g, &s) in sizes.iter().enumerate() {
        let v = if zero_last && g + 1 == groups { 0.0 } else { 1.0 - g as f64 * (0.6 / groups as f64) };
        lambdas.extend(std::iter::repeat_n(v, s));
    }
    let u = haar_unitary::<T>(n, rng);
    let v = haar_unitary::<T>(n, rng);
    let d = diag_matrix(&lambdas.iter().map(|&l| creal(lit::<T>(l))).collect::<Vec<_>>());
    let mut mats = vec![normalised(&u * d * v.adjoint())];
    let w = haar_unitary::<T>(n * n, rng);
    for l in 1..rank {
        mats.push(ComplexMatrix::from_fn(n, n, |i, j| w[(i * n + j, l)]));
    }
    gram_schmidt(&mut mats, 1).expect("Haar columns are generic");
    let mus = random_spectrum(rank, 1e-3, rng);
    let ens = EigenEnsemble::from_raw(n, n, mus.iter().map(|&m| lit(m)).collect(), mats, lit(1e-6), false);
    (ens, *sizes.iter().max().unwrap())
}

/// Rank-two `2⊗2` state in both classes: `A_0 = xx*`, `A_1 = yy*` with
/// `y ⊥ x`, weights `(μ, 1−μ)`.
pub fn cross_class_ensemble<T: Real>(mu: T, rng: &mut impl Rng) -> EigenEnsemble<T> {
    let x = random_unit_vector::<T>(2, rng);
    let y = ComplexMatrix::from_column_slice(2, 1, &[-x[(1, 0)].conj(), x[(0, 0)].conj()]);
    EigenEnsemble::from_raw(
        2,
        2,
        vec![mu, T::one() - mu],
        vec![&x * x.adjoint(), &y * y.adjoint()],
        lit(1e-6),
        false,
    )
}
