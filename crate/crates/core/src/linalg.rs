//! Thin wrappers over nalgebra decompositions with the ordering and
//! normalisation conventions the rest of the crate relies on.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;

use crate::scalar::{conj, creal, modulus, ComplexMatrix, Real};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
///
/// Column `k` of the returned matrix is the eigenvector of `values[k]`.
pub fn hermitian_eigen<T: Real>(m: &ComplexMatrix<T>) -> (Vec<T>, ComplexMatrix<T>) {
    let eig = SymmetricEigen::new(m.clone());
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Full SVD `m = U diag(s) V*` of a square matrix with `s` descending.
///
/// Built on the Hermitian eigensolver: `V` diagonalises `m* m`, the
/// singular values are the column norms of `m V`, and `U` is those columns
/// normalised, re-orthonormalised and completed for the null space.
/// (nalgebra's complex bidiagonal SVD returns wrong factors for some
/// rank-deficient inputs.)
pub fn svd_descending<T: Real>(
    m: &ComplexMatrix<T>,
) -> (Vec<T>, ComplexMatrix<T>, ComplexMatrix<T>) {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "svd_descending expects a square matrix");
    let (_, v0) = hermitian_eigen(&(m.adjoint() * m));
    let b0 = m * &v0;
    let norms: Vec<T> = (0..n).map(|k| b0.column(k).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap_or(std::cmp::Ordering::Equal));
    let s: Vec<T> = order.iter().map(|&k| norms[k]).collect();
    let v = select_columns(&v0, &order);
    let b = select_columns(&b0, &order);
    let top = s.first().copied().unwrap_or_else(T::zero).max(T::one());
    let cutoff = T::default_epsilon() * nalgebra::convert::<f64, T>(64.0 * n.max(1) as f64) * top;
    let mut u = ComplexMatrix::<T>::zeros(n, n);
    let mut kept = 0;
    for k in 0..n {
        if s[k] <= cutoff {
            break;
        }
        let mut col = b.column(k).map(|z| z / creal(s[k]));
        // two passes of Gram-Schmidt against the columns already fixed
        for _ in 0..2 {
            for j in 0..kept {
                let ip = u.column(j).dotc(&col);
                col -= u.column(j).map(|z| z * ip);
            }
        }
        let nrm = col.norm();
        if nrm < nalgebra::convert(0.5) {
            break;
        }
        u.set_column(k, &col.map(|z| z / creal(nrm)));
        kept += 1;
    }
    if kept < n {
        let rest = orthogonal_complement(&u.columns(0, kept).into_owned(), n);
        for j in 0..n - kept {
            u.set_column(kept + j, &rest.column(j));
        }
    }
    (s, u, v)
}

pub fn identity<T: Real>(n: usize) -> ComplexMatrix<T> {
    ComplexMatrix::identity(n, n)
}

pub fn frobenius<T: Real>(m: &ComplexMatrix<T>) -> T {
    m.iter()
        .fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im)
        .sqrt()
}

/// Largest singular value.
pub fn operator_norm<T: Real>(m: &ComplexMatrix<T>) -> T {
    if m.is_empty() {
        return T::zero();
    }
    m.clone()
        .singular_values()
        .iter()
        .fold(T::zero(), |acc, &s| if s > acc { s } else { acc })
}

/// `‖U*U − I‖_F`.
pub fn unitarity_residual<T: Real>(u: &ComplexMatrix<T>) -> T {
    frobenius(&(u.adjoint() * u - identity::<T>(u.ncols())))
}

pub fn hermiticity_residual<T: Real>(m: &ComplexMatrix<T>) -> T {
    m.iter()
        .zip(m.adjoint().iter())
        .fold(T::zero(), |acc, (a, b)| acc.max(modulus(*a - *b)))
}

pub fn trace<T: Real>(m: &ComplexMatrix<T>) -> Complex<T> {
    m.diagonal().iter().fold(Complex::new(T::zero(), T::zero()), |a, &z| a + z)
}

/// `⟨a, b⟩ = Σ conj(a_ij) b_ij` (Hilbert–Schmidt inner product).
pub fn hs_inner<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Complex<T> {
    a.iter()
        .zip(b.iter())
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + conj(*x) * *y)
}

pub fn scale_matrix<T: Real>(m: &ComplexMatrix<T>, z: Complex<T>) -> ComplexMatrix<T> {
    m.map(|x| x * z)
}

/// Orthonormal basis (columns) of the kernel of `m`: right singular vectors
/// whose singular value is at most `tol`.
pub fn kernel_basis<T: Real>(m: &ComplexMatrix<T>, tol: T) -> ComplexMatrix<T> {
    let (s, _, v) = svd_descending(m);
    let cols: Vec<usize> = (0..s.len()).filter(|&k| s[k] <= tol).collect();
    select_columns(&v, &cols)
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// (orthonormal) columns of `basis` in dimension `n`.
pub fn orthogonal_complement<T: Real>(basis: &ComplexMatrix<T>, n: usize) -> ComplexMatrix<T> {
    if basis.ncols() == 0 {
        return identity(n);
    }
    let proj = basis * basis.adjoint();
    let (vals, vecs) = hermitian_eigen(&proj);
    let half: T = nalgebra::convert(0.5);
    let cols: Vec<usize> = (0..n).filter(|&k| vals[k] < half).collect();
    select_columns(&vecs, &cols)
}

pub fn select_columns<T: Real>(m: &ComplexMatrix<T>, cols: &[usize]) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(m.nrows(), cols.len(), |i, j| m[(i, cols[j])])
}

/// Horizontal concatenation of column blocks with a common row count.
pub fn hstack<T: Real>(rows: usize, blocks: &[&ComplexMatrix<T>]) -> ComplexMatrix<T> {
    let total: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = ComplexMatrix::zeros(rows, total);
    let mut at = 0;
    for b in blocks {
        out.view_mut((0, at), (rows, b.ncols())).copy_from(*b);
        at += b.ncols();
    }
    out
}

pub fn diag_matrix<T: Real>(d: &[Complex<T>]) -> ComplexMatrix<T> {
    let n = d.len();
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { d[i] } else { creal(T::zero()) })
}

pub fn real_to_complex<T: Real>(m: &DMatrix<T>) -> ComplexMatrix<T> {
    m.map(creal)
}

pub fn is_finite<T: Real>(m: &ComplexMatrix<T>) -> bool {
    m.iter().all(|z| {
        let re = crate::scalar::to_f64(z.re);
        let im = crate::scalar::to_f64(z.im);
        re.is_finite() && im.is_finite()
    })
}

/// Projector `X X*` onto the span of the orthonormal columns of `x`.
pub fn projector<T: Real>(x: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    x * x.adjoint()
}
