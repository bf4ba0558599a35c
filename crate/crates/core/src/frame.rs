//! Singular-value frame of the leading coefficient matrix `A_0`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{diag_matrix, hs_inner, svd_descending};
use crate::scalar::{conj, creal, lit, modulus, scale, to_f64, unit_phase, ComplexMatrix, Real};
use crate::state::EigenEnsemble;
use crate::tolerance::Tolerances;

/// `A_0 = Σ_i λ_i ψ_i η_i*` with `λ` descending; `psi`/`eta` hold the
/// frame vectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularFrame<T: Real> {
    pub lambdas: Vec<T>,
    pub psi: ComplexMatrix<T>,
    pub eta: ComplexMatrix<T>,
}

impl<T: Real> SingularFrame<T> {
    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    /// Smallest gap between consecutive singular values (`+∞` proxy for n = 1).
    pub fn min_gap(&self) -> T {
        self.lambdas
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(T::max_value().unwrap_or_else(T::one), |a, g| a.min(g))
    }

    /// `Σ λ_i ψ_i η_i*`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let d = diag_matrix(&self.lambdas.iter().map(|&l| creal(l)).collect::<Vec<_>>());
        &self.psi * d * self.eta.adjoint()
    }

    /// Whether `λ_n` counts as zero, which frees the phase of `η_n`.
    pub fn last_is_zero(&self, zero: T) -> bool {
        self.lambdas.last().is_some_and(|&l| l <= zero)
    }
}

/// SVD frame of `a0` with a deterministic phase gauge.
///
/// For `λ_i > 0` the largest-modulus entry of `ψ_i` is rotated to the
/// positive real axis and `η_i` receives the same rotation; for zero
/// singular values `ψ_i` and `η_i` are gauged independently the same way.
pub fn svd_frame<T: Real>(a0: &ComplexMatrix<T>, tol: &Tolerances<T>) -> Result<SingularFrame<T>> {
    if !a0.is_square() {
        return Err(Error::BadDimension(format!(
            "A0 must be square, got {}x{}",
            a0.nrows(),
            a0.ncols()
        )));
    }
    let n = a0.nrows();
    let (lambdas, mut psi, mut eta) = svd_descending(a0);
    for i in 0..n {
        let p = conj(unit_phase(largest_entry(&psi, i)));
        if lambdas[i] > tol.zero {
            scale_column(&mut psi, i, p);
            scale_column(&mut eta, i, p);
        } else {
            scale_column(&mut psi, i, p);
            let q = conj(unit_phase(largest_entry(&eta, i)));
            scale_column(&mut eta, i, q);
        }
    }
    Ok(SingularFrame { lambdas, psi, eta })
}

fn largest_entry<T: Real>(m: &ComplexMatrix<T>, col: usize) -> Complex<T> {
    let mut best = m[(0, col)];
    for r in 1..m.nrows() {
        if modulus(m[(r, col)]) > modulus(best) {
            best = m[(r, col)];
        }
    }
    best
}

fn scale_column<T: Real>(m: &mut ComplexMatrix<T>, col: usize, z: Complex<T>) {
    for r in 0..m.nrows() {
        m[(r, col)] *= z;
    }
}

/// True iff every gap between consecutive singular values exceeds `gap`.
pub fn is_multiplicity_free<T: Real>(frame: &SingularFrame<T>, gap: T) -> bool {
    frame.dim() < 2 || frame.min_gap() > gap
}

/// `B_l = ψ* A_l η` for `l = 1..N`, plus `B_0 = diag(λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BStack<T: Real> {
    /// `B_1 .. B_N`.
    pub mats: Vec<ComplexMatrix<T>>,
    /// Diagonal of `B_0`.
    pub b0: Vec<T>,
}

impl<T: Real> BStack<T> {
    pub fn n(&self) -> usize {
        self.b0.len()
    }

    pub fn labels(&self) -> usize {
        self.mats.len()
    }

    /// Entry `b^{(l)}_{ij}` with `l` 1-based as in the invariant definitions.
    #[inline]
    pub fn entry(&self, l: usize, i: usize, j: usize) -> Complex<T> {
        self.mats[l - 1][(i, j)]
    }
}

pub fn b_stack<T: Real>(frame: &SingularFrame<T>, ensemble: &EigenEnsemble<T>) -> Result<BStack<T>> {
    let n = frame.dim();
    if ensemble.dims() != (n, n) {
        return Err(Error::BadDimension(format!(
            "frame is {n}-dimensional, ensemble is {:?}",
            ensemble.dims()
        )));
    }
    let ph = frame.psi.adjoint();
    let mats = ensemble.coeff_mats()[1..]
        .iter()
        .map(|a| &ph * a * &frame.eta)
        .collect();
    Ok(BStack { mats, b0: frame.lambdas.clone() })
}

/// Replaces `A_0` by a nearby multiplicity-free matrix.
///
/// Singular values within `tol.sv_gap` of each other form a group; a
/// group of size `g` is spread with spacing `eps / g` (centred on the
/// shared value, or starting at zero for a group of zero singular values),
/// so no value moves by more than `eps`. `A_0` is renormalised and the
/// remaining `A_l` are re-orthonormalised against it, so the result is the
/// eigen-decomposition of a nearby state with the same weights.
pub fn perturb_to_multiplicity_free<T: Real>(
    ensemble: &EigenEnsemble<T>,
    eps: T,
    tol: &Tolerances<T>,
) -> Result<EigenEnsemble<T>> {
    if eps <= T::zero() {
        return Err(Error::Invalid("eps must be positive".into()));
    }
    let a0 = &ensemble.coeff_mats()[0];
    let frame = svd_frame(a0, tol)?;
    let groups = singular_groups(&frame.lambdas, tol.sv_gap);
    let largest = groups.iter().map(|g| g.len()).max().unwrap_or(1);
    if largest < 2 {
        return Ok(ensemble.clone());
    }
    let mut shifted = frame.lambdas.clone();
    for g in &groups {
        let size = g.len();
        if size < 2 {
            continue;
        }
        let sz: T = lit(size as f64);
        let at_zero = g.iter().all(|&i| frame.lambdas[i] <= tol.zero);
        for (k, &i) in g.iter().enumerate() {
            let kk: T = lit(k as f64);
            let shift = if at_zero {
                eps * (sz - T::one() - kk) / sz
            } else {
                eps * ((sz - T::one()) / lit(2.0) - kk) / sz
            };
            // members of a group share one value; spread from their mean
            let mean = g.iter().fold(T::zero(), |a, &j| a + frame.lambdas[j]) / sz;
            shifted[i] = if at_zero { shift } else { mean + shift };
        }
    }
    let min_required = eps / lit(2.0 * largest as f64);
    if shifted.windows(2).any(|w| w[0] - w[1] < min_required) || shifted.iter().any(|&l| l < T::zero()) {
        return Err(Error::EpsTooLarge(to_f64(eps)));
    }
    let norm = shifted.iter().fold(T::zero(), |a, &l| a + l * l).sqrt();
    let d = diag_matrix(&shifted.iter().map(|&l| creal(l / norm)).collect::<Vec<_>>());
    let new_a0 = &frame.psi * d * frame.eta.adjoint();

    let mut mats = vec![new_a0];
    for a in &ensemble.coeff_mats()[1..] {
        let mut b = a.clone();
        for q in &mats {
            let ip = hs_inner(q, &b);
            b -= q.map(|z| z * ip);
        }
        let nrm = crate::linalg::frobenius(&b);
        mats.push(b.map(|z| scale(z, T::one() / nrm)));
    }
    Ok(ensemble.with_coeff_mats(mats))
}

/// Groups of indices whose consecutive singular values differ by at most `gap`.
pub fn singular_groups<T: Real>(lambdas: &[T], gap: T) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &l) in lambdas.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if lambdas[*g.last().unwrap()] - l <= gap => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::werner_ensemble;
    use crate::linalg::{frobenius, operator_norm, unitarity_residual};
    use crate::random::{haar_unitary, random_ensemble, seeded};
    use crate::scalar::cplx;
    use crate::state::EigenEnsemble;

    fn tol() -> Tolerances<f64> {
        Tolerances::default()
    }

    #[test]
    fn werner_frame_is_canonical() {
        let ens = werner_ensemble::<f64>(0.5);
        let frame = svd_frame(&ens.coeff_mats()[0], &tol()).unwrap();
        assert_eq!(frame.lambdas, vec![1.0, 0.0]);
        let id = ComplexMatrix::<f64>::identity(2, 2);
        assert!(frobenius(&(&frame.psi - &id)) < 1e-15);
        assert!(frobenius(&(&frame.eta - &id)) < 1e-15);
        assert!(is_multiplicity_free(&frame, 1e-6));
    }

    #[test]
    fn werner_b_stack() {
        let ens = werner_ensemble::<f64>(0.5);
        let frame = svd_frame(&ens.coeff_mats()[0], &tol()).unwrap();
        let stack = b_stack(&frame, &ens).unwrap();
        assert_eq!(stack.labels(), 3);
        let b1 = stack.mats[0].map(|z| modulus(z));
        assert_eq!(b1[(0, 0)], 0.0);
        assert_eq!(b1[(0, 1)], 0.0);
        assert_eq!(b1[(1, 0)], 0.0);
        assert!((b1[(1, 1)] - 1.0).abs() < 1e-15);
        for (b, a) in stack.mats.iter().zip(&ens.coeff_mats()[1..]) {
            assert!(frobenius(&(b - a)) < 1e-15);
        }
    }

    #[test]
    fn maximally_entangled_is_not_multiplicity_free() {
        let a = ComplexMatrix::<f64>::identity(2, 2).map(|z| z * std::f64::consts::FRAC_1_SQRT_2);
        let frame = svd_frame(&a, &tol()).unwrap();
        assert!((frame.lambdas[0] - frame.lambdas[1]).abs() < 1e-15);
        assert!(!is_multiplicity_free(&frame, 1e-6));
    }

    #[test]
    fn boundary_gap_is_not_multiplicity_free() {
        let frame = SingularFrame {
            lambdas: vec![0.6, 0.6 - 5e-7, 0.2],
            psi: ComplexMatrix::identity(3, 3),
            eta: ComplexMatrix::identity(3, 3),
        };
        assert!(!is_multiplicity_free(&frame, 1e-6));
    }

    #[test]
    fn random_frame_reconstructs() {
        let mut rng = seeded(3);
        let u = haar_unitary::<f64>(4, &mut rng);
        let a = u.map(|z| z * cplx(0.3, -0.1)) + ComplexMatrix::from_fn(4, 4, |i, j| cplx((i + 2 * j) as f64 * 0.05, 0.1));
        let frame = svd_frame(&a, &tol()).unwrap();
        let sum_sq: f64 = frame.lambdas.iter().map(|l| l * l).sum();
        assert!((sum_sq - frobenius(&a).powi(2)).abs() < 1e-12);
        assert!(frobenius(&(frame.reconstruct() - &a)) < 1e-12);
        assert!(unitarity_residual(&frame.psi) < 1e-12);
        assert!(unitarity_residual(&frame.eta) < 1e-12);
    }

    #[test]
    fn frame_is_deterministic() {
        let mut rng = seeded(8);
        let a = haar_unitary::<f64>(3, &mut rng) * ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![cplx(0.8, 0.0), cplx(0.5, 0.0), cplx(0.1, 0.0)]));
        let f1 = svd_frame(&a, &tol()).unwrap();
        let f2 = svd_frame(&a, &tol()).unwrap();
        assert_eq!(f1, f2);
    }

    #[test]
    fn b_norms_match_a_norms() {
        let mut rng = seeded(21);
        let ens = random_ensemble::<f64>(3, &[0.5, 0.3, 0.2], &mut rng);
        let frame = svd_frame(&ens.coeff_mats()[0], &tol()).unwrap();
        let stack = b_stack(&frame, &ens).unwrap();
        for (b, a) in stack.mats.iter().zip(&ens.coeff_mats()[1..]) {
            assert!((frobenius(b) - frobenius(a)).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_state_has_empty_stack() {
        let mut a = ComplexMatrix::<f64>::zeros(2, 2);
        a[(0, 0)] = cplx(1.0, 0.0);
        let ens = EigenEnsemble::from_parts(vec![1.0], vec![a.clone()], &tol()).unwrap();
        let frame = svd_frame(&a, &tol()).unwrap();
        assert!(b_stack(&frame, &ens).unwrap().mats.is_empty());
    }

    #[test]
    fn perturb_leaves_multiplicity_free_alone() {
        let mut rng = seeded(4);
        let ens = random_ensemble::<f64>(3, &[0.6, 0.4], &mut rng);
        let out = perturb_to_multiplicity_free(&ens, 1e-3, &tol()).unwrap();
        assert_eq!(out, ens);
    }

    #[test]
    fn perturb_maximally_entangled() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a0 = ComplexMatrix::<f64>::identity(2, 2).map(|z| z * s);
        let mut a1 = ComplexMatrix::<f64>::zeros(2, 2);
        a1[(0, 1)] = cplx(1.0, 0.0);
        let ens = EigenEnsemble::from_parts(vec![0.7, 0.3], vec![a0, a1], &tol()).unwrap();
        let eps = 1e-3;
        let out = perturb_to_multiplicity_free(&ens, eps, &tol()).unwrap();
        let frame = svd_frame(&out.coeff_mats()[0], &tol()).unwrap();
        assert!(is_multiplicity_free(&frame, 1e-6));
        assert!(frame.min_gap() >= eps / 4.0);
        for &l in &frame.lambdas {
            assert!((l - s).abs() <= eps);
        }
        let dist = operator_norm(&(ens.to_matrix() - out.to_matrix()));
        assert!(dist <= 16.0 * eps, "{dist}");
    }

    #[test]
    fn perturb_triple_degeneracy() {
        // A0 = (ψ diag(a, a, a) η*) inside n = 3, plus one orthogonal partner
        let mut rng = seeded(77);
        let u = haar_unitary::<f64>(3, &mut rng);
        let v = haar_unitary::<f64>(3, &mut rng);
        let a0 = (&u * v.adjoint()).map(|z| z / 3f64.sqrt());
        let mut a1 = &u * ComplexMatrix::from_fn(3, 3, |i, j| cplx(if i == 0 && j == 1 { 1.0 } else { 0.0 }, 0.0)) * v.adjoint();
        let ip = hs_inner(&a0, &a1);
        a1 -= a0.map(|z| z * ip);
        let nrm = frobenius(&a1);
        a1 = a1.map(|z| z / nrm);
        let ens = EigenEnsemble::from_parts(vec![0.8, 0.2], vec![a0, a1], &tol()).unwrap();
        let eps = 2e-3;
        let out = perturb_to_multiplicity_free(&ens, eps, &tol()).unwrap();
        let frame = svd_frame(&out.coeff_mats()[0], &tol()).unwrap();
        assert!(frame.min_gap() >= eps / 6.0);
        let dist = operator_norm(&(ens.to_matrix() - out.to_matrix()));
        assert!(dist <= 2.0 * 27.0 * eps);
        assert!((hs_inner(&out.coeff_mats()[0], &out.coeff_mats()[1])).norm() < 1e-12);
    }

    #[test]
    fn perturb_rejects_crowded_spectrum() {
        // two groups only 1e-3 apart cannot absorb a 1e-2 spread
        let lam = [0.6, 0.6, 0.599, 0.599];
        let norm = lam.iter().map(|l: &f64| l * l).sum::<f64>().sqrt();
        let a0 = ComplexMatrix::<f64>::from_fn(4, 4, |i, j| cplx(if i == j { lam[i] / norm } else { 0.0 }, 0.0));
        let ens = EigenEnsemble::from_parts(vec![1.0], vec![a0], &tol()).unwrap();
        assert!(matches!(perturb_to_multiplicity_free(&ens, 1e-2, &tol()), Err(Error::EpsTooLarge(_))));
        assert!(perturb_to_multiplicity_free(&ens, -1.0, &tol()).is_err());
    }
}
