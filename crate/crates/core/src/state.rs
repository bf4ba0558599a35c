//! Bipartite density matrices, their coefficient-matrix ensembles and the
//! action of local unitaries.
//!
//! Basis kets `|ij⟩` are flattened row-major: index `i * right + j`, with
//! `i` the first factor. With this convention the local action
//! `ρ ↦ (U ⊗ V̄) ρ (U ⊗ V̄)*` maps every coefficient matrix `A ↦ U A V*`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{
    frobenius, hermitian_eigen, hermiticity_residual, hs_inner, identity, is_finite, trace,
    unitarity_residual,
};
use crate::scalar::{creal, modulus, to_f64, ComplexMatrix, ComplexVector, Real};
use crate::tolerance::Tolerances;

/// A validated density matrix on `C^left ⊗ C^right`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    left: usize,
    right: usize,
    mat: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates an `n² × n²` matrix over an `n × n` system.
    pub fn new(mat: ComplexMatrix<T>, n: usize, tol: &Tolerances<T>) -> Result<Self> {
        validate_density(mat, n, tol)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.left, self.right)
    }

    /// Local dimension `n` when both factors agree.
    pub fn local_dim(&self) -> Option<usize> {
        (self.left == self.right).then_some(self.left)
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.mat
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> T {
        trace(&(&self.mat * &self.mat)).re
    }

    /// Wraps a matrix already known to be a state (internal constructions).
    pub(crate) fn from_trusted(mat: ComplexMatrix<T>, left: usize, right: usize) -> Self {
        Self { left, right, mat }
    }
}

/// Validates `mat` as a state on an `n × n` bipartite system (`n ≥ 2`).
pub fn validate_density<T: Real>(
    mat: ComplexMatrix<T>,
    n: usize,
    tol: &Tolerances<T>,
) -> Result<DensityMatrix<T>> {
    if n < 2 {
        return Err(Error::BadDimension(format!("local dimension {n} < 2")));
    }
    validate_bipartite(mat, n, n, tol)
}

/// Validates `mat` as a state on `C^left ⊗ C^right`.
///
/// A matrix whose asymmetry is below `tol.herm` is replaced by its
/// Hermitian part before the trace and positivity checks.
pub fn validate_bipartite<T: Real>(
    mat: ComplexMatrix<T>,
    left: usize,
    right: usize,
    tol: &Tolerances<T>,
) -> Result<DensityMatrix<T>> {
    let d = left * right;
    if left == 0 || right == 0 || mat.nrows() != d || mat.ncols() != d {
        return Err(Error::BadDimension(format!(
            "expected {d}x{d} for {left}x{right} system, got {}x{}",
            mat.nrows(),
            mat.ncols()
        )));
    }
    if !is_finite(&mat) {
        return Err(Error::NonFinite);
    }
    let asym = hermiticity_residual(&mat);
    if asym > tol.herm {
        return Err(Error::NotHermitian(to_f64(asym)));
    }
    let half: T = nalgebra::convert(0.5);
    let mat = (&mat + mat.adjoint()).map(|z| crate::scalar::scale(z, half));
    let tr = trace(&mat).re;
    if (tr - T::one()).abs() > tol.herm {
        return Err(Error::TraceNotOne(to_f64(tr)));
    }
    let (vals, _) = hermitian_eigen(&mat);
    let min = vals.last().copied().unwrap_or_else(T::zero);
    if min < -tol.herm {
        return Err(Error::NotPsd(to_f64(min)));
    }
    Ok(DensityMatrix { left, right, mat })
}

/// Reshapes a vector on `C^left ⊗ C^right` into its coefficient matrix,
/// `A[(i, j)] = ⟨ij|ξ⟩`.
pub fn vec_to_coeff<T: Real>(
    xi: &ComplexVector<T>,
    left: usize,
    right: usize,
) -> Result<ComplexMatrix<T>> {
    if xi.len() != left * right {
        return Err(Error::BadDimension(format!(
            "vector of length {} cannot be reshaped to {left}x{right}",
            xi.len()
        )));
    }
    Ok(ComplexMatrix::from_fn(left, right, |i, j| xi[i * right + j]))
}

/// Inverse of [`vec_to_coeff`].
pub fn coeff_to_vec<T: Real>(a: &ComplexMatrix<T>) -> ComplexVector<T> {
    let (l, r) = a.shape();
    ComplexVector::from_fn(l * r, |k, _| a[(k / r, k % r)])
}

/// Eigenvalues `μ_l` (kept, strictly positive) with coefficient matrices
/// `A_l` of the corresponding unit eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenEnsemble<T: Real> {
    left: usize,
    right: usize,
    mus: Vec<T>,
    coeff_mats: Vec<ComplexMatrix<T>>,
    degenerate_groups: Vec<Vec<usize>>,
    supplied: bool,
}

impl<T: Real> EigenEnsemble<T> {
    /// Builds an ensemble from caller-chosen eigenpairs, kept in the given
    /// order. The `A_l` must be orthonormal in the Hilbert–Schmidt inner
    /// product and the weights must sum to one.
    pub fn from_parts(
        mus: Vec<T>,
        coeff_mats: Vec<ComplexMatrix<T>>,
        tol: &Tolerances<T>,
    ) -> Result<Self> {
        if mus.is_empty() || mus.len() != coeff_mats.len() {
            return Err(Error::BadEnsemble(format!(
                "{} weights for {} matrices",
                mus.len(),
                coeff_mats.len()
            )));
        }
        let (left, right) = coeff_mats[0].shape();
        if coeff_mats.iter().any(|a| a.shape() != (left, right)) {
            return Err(Error::BadDimension("coefficient matrices differ in shape".into()));
        }
        if mus.iter().any(|&m| m <= T::zero()) {
            return Err(Error::BadEnsemble("weights must be positive".into()));
        }
        let total = mus.iter().fold(T::zero(), |a, &m| a + m);
        if (total - T::one()).abs() > tol.eq {
            return Err(Error::BadEnsemble(format!("weights sum to {}", to_f64(total))));
        }
        for (l, a) in coeff_mats.iter().enumerate() {
            for (m, b) in coeff_mats.iter().enumerate().skip(l) {
                let target = if l == m { T::one() } else { T::zero() };
                let ip = hs_inner(a, b) - creal(target);
                if modulus(ip) > tol.eq {
                    return Err(Error::BadEnsemble(format!(
                        "coefficient matrices {l} and {m} are not orthonormal"
                    )));
                }
            }
        }
        let degenerate_groups = degenerate_groups(&mus, tol.gap);
        Ok(Self { left, right, mus, coeff_mats, degenerate_groups, supplied: true })
    }

    pub(crate) fn from_raw(
        left: usize,
        right: usize,
        mus: Vec<T>,
        coeff_mats: Vec<ComplexMatrix<T>>,
        gap: T,
        supplied: bool,
    ) -> Self {
        let degenerate_groups = degenerate_groups(&mus, gap);
        Self { left, right, mus, coeff_mats, degenerate_groups, supplied }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.left, self.right)
    }

    pub fn local_dim(&self) -> Option<usize> {
        (self.left == self.right).then_some(self.left)
    }

    pub fn mus(&self) -> &[T] {
        &self.mus
    }

    pub fn coeff_mats(&self) -> &[ComplexMatrix<T>] {
        &self.coeff_mats
    }

    pub fn rank(&self) -> usize {
        self.mus.len()
    }

    /// Groups (by index) of kept eigenvalues closer than the gap tolerance.
    pub fn degenerate_groups(&self) -> &[Vec<usize>] {
        &self.degenerate_groups
    }

    pub fn is_degenerate(&self) -> bool {
        !self.degenerate_groups.is_empty()
    }

    /// True when the decomposition was chosen by the caller rather than
    /// computed from a density matrix.
    pub fn is_supplied(&self) -> bool {
        self.supplied
    }

    #[cfg(test)]
    pub(crate) fn set_supplied(&mut self, supplied: bool) {
        self.supplied = supplied;
    }

    /// `Σ_l μ_l vec(A_l) vec(A_l)*`.
    pub fn to_matrix(&self) -> ComplexMatrix<T> {
        let d = self.left * self.right;
        let mut rho = ComplexMatrix::zeros(d, d);
        for (&mu, a) in self.mus.iter().zip(&self.coeff_mats) {
            let v = coeff_to_vec(a);
            rho += (&v * v.adjoint()).map(|z| crate::scalar::scale(z, mu));
        }
        rho
    }

    pub fn to_density(&self) -> DensityMatrix<T> {
        DensityMatrix::from_trusted(self.to_matrix(), self.left, self.right)
    }

    /// Frobenius distance between `rho` and the state this ensemble rebuilds.
    pub fn reconstruction_residual(&self, rho: &DensityMatrix<T>) -> T {
        frobenius(&(self.to_matrix() - rho.matrix()))
    }

    /// Applies `A_l ↦ U A_l V*` to every coefficient matrix.
    pub fn apply_local(&self, pair: &LocalUnitaryPair<T>) -> Result<Self> {
        if pair.u.nrows() != self.left || pair.v.nrows() != self.right {
            return Err(Error::BadDimension("local unitary does not match ensemble".into()));
        }
        let mut out = self.clone();
        let vh = pair.v.adjoint();
        for a in &mut out.coeff_mats {
            *a = &pair.u * &*a * &vh;
        }
        Ok(out)
    }

    /// Replaces the coefficient matrices, keeping weights and flags.
    pub(crate) fn with_coeff_mats(&self, coeff_mats: Vec<ComplexMatrix<T>>) -> Self {
        Self { coeff_mats, ..self.clone() }
    }

    pub(crate) fn with_mus(&self, mus: Vec<T>, gap: T) -> Self {
        let degenerate_groups = degenerate_groups(&mus, gap);
        Self { mus, degenerate_groups, ..self.clone() }
    }
}

fn degenerate_groups<T: Real>(mus: &[T], gap: T) -> Vec<Vec<usize>> {
    // Caller-supplied ensembles may be unsorted, so group by value.
    let mut order: Vec<usize> = (0..mus.len()).collect();
    order.sort_by(|&a, &b| mus[b].partial_cmp(&mus[a]).unwrap_or(std::cmp::Ordering::Equal));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut current = Vec::new();
    for (pos, &k) in order.iter().enumerate() {
        if pos > 0 && (mus[order[pos - 1]] - mus[k]) >= gap {
            if current.len() > 1 {
                groups.push(std::mem::take(&mut current));
            }
            current.clear();
        }
        current.push(k);
    }
    if current.len() > 1 {
        groups.push(current);
    }
    for g in &mut groups {
        g.sort_unstable();
    }
    groups
}

/// Spectral decomposition of `rho` into `(μ_l, A_l)`, eigenvalues descending,
/// eigenvalues below `rank_cut` dropped.
///
/// Eigenvalues closer than `tol.gap` are reported through
/// [`EigenEnsemble::degenerate_groups`]; the basis inside such an
/// eigenspace is whatever the eigensolver returned.
pub fn eigen_decompose<T: Real>(
    rho: &DensityMatrix<T>,
    rank_cut: T,
    tol: &Tolerances<T>,
) -> EigenEnsemble<T> {
    let (left, right) = rho.dims();
    let (vals, vecs) = hermitian_eigen(rho.matrix());
    let mut mus = Vec::new();
    let mut mats = Vec::new();
    for (k, &mu) in vals.iter().enumerate() {
        if mu < rank_cut {
            continue;
        }
        let xi = vecs.column(k).into_owned();
        mus.push(mu);
        mats.push(ComplexMatrix::from_fn(left, right, |i, j| xi[i * right + j]));
    }
    EigenEnsemble::from_raw(left, right, mus, mats, tol.gap, false)
}

/// A pair `(U, V)` acting on states as `U ⊗ V̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitaryPair<T: Real> {
    pub u: ComplexMatrix<T>,
    pub v: ComplexMatrix<T>,
}

impl<T: Real> LocalUnitaryPair<T> {
    pub fn new(u: ComplexMatrix<T>, v: ComplexMatrix<T>, tol: &Tolerances<T>) -> Result<Self> {
        if !u.is_square() || !v.is_square() {
            return Err(Error::BadDimension("local unitaries must be square".into()));
        }
        let worst = unitarity_residual(&u).max(unitarity_residual(&v));
        if worst > tol.eq {
            return Err(Error::Invalid(format!(
                "pair is not unitary (residual {:.3e})",
                to_f64(worst)
            )));
        }
        Ok(Self { u, v })
    }

    pub fn identity(left: usize, right: usize) -> Self {
        Self { u: identity(left), v: identity(right) }
    }

    /// The operator `U ⊗ V̄` on the joint space.
    pub fn operator(&self) -> ComplexMatrix<T> {
        self.u.kronecker(&self.v.map(|z| Complex::new(z.re, -z.im)))
    }

    /// Pair equal to applying `self` first and `then` second.
    pub fn then(&self, then: &Self) -> Self {
        Self { u: &then.u * &self.u, v: &then.v * &self.v }
    }

    pub fn inverse(&self) -> Self {
        Self { u: self.u.adjoint(), v: self.v.adjoint() }
    }

    pub fn unitarity_residual(&self) -> T {
        unitarity_residual(&self.u).max(unitarity_residual(&self.v))
    }
}

/// `(U ⊗ V̄) ρ (U ⊗ V̄)*`.
pub fn apply_local<T: Real>(
    rho: &DensityMatrix<T>,
    pair: &LocalUnitaryPair<T>,
) -> Result<DensityMatrix<T>> {
    let (left, right) = rho.dims();
    if pair.u.nrows() != left || pair.v.nrows() != right {
        return Err(Error::BadDimension(format!(
            "pair acts on {}x{}, state is {left}x{right}",
            pair.u.nrows(),
            pair.v.nrows()
        )));
    }
    let w = pair.operator();
    let mat = &w * rho.matrix() * w.adjoint();
    Ok(DensityMatrix::from_trusted(mat, left, right))
}

/// Frobenius distance between `(U⊗V̄) a (U⊗V̄)*` and `b`.
pub fn conjugation_residual<T: Real>(
    a: &DensityMatrix<T>,
    b: &DensityMatrix<T>,
    pair: &LocalUnitaryPair<T>,
) -> Result<T> {
    let moved = apply_local(a, pair)?;
    if moved.dims() != b.dims() {
        return Err(Error::BadDimension("states differ in shape".into()));
    }
    Ok(frobenius(&(moved.mat - b.matrix())))
}
