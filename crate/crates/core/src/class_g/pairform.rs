//! Unitary equivalence of projector pairs.
//!
//! With `S = 2P − 1` and `V = S(2Q − 1)`, `V` is unitary and `SVS = V*`,
//! so `S` swaps the eigenspaces of `λ` and `λ̄`. A unitary intertwining two
//! pairs is assembled block by block: freely on `λ` with positive imaginary
//! part, forced by `S` on `λ̄`, and by matching the `±1` eigenspaces of `S`
//! inside the `V = ±1` eigenspaces.


use crate::error::{Error, Result};
use crate::linalg::{frobenius, hermitian_eigen, identity, kernel_basis, orthogonal_complement, select_columns, trace, unitarity_residual};
use crate::scalar::{cplx, creal, lit, to_f64, ComplexMatrix, Real};
use crate::tolerance::Tolerances;

/// `Tr V^k`, `Tr (S E_+)^k`, `Tr (S E_−)^k` for `k = 1..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairTraces<T: Real> {
    pub vk: Vec<T>,
    pub ek_plus: Vec<T>,
    pub ek_minus: Vec<T>,
    /// Largest imaginary part discarded (all traces are real in exact arithmetic).
    pub max_imag: T,
}

fn reflections<T: Real>(p: &ComplexMatrix<T>, q: &ComplexMatrix<T>) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let n = p.nrows();
    let two = creal(lit::<T>(2.0));
    let s = p.map(|z| z * two) - identity::<T>(n);
    let v = &s * (q.map(|z| z * two) - identity::<T>(n));
    (s, v)
}

fn eigenspace<T: Real>(v: &ComplexMatrix<T>, at: T, tol: &Tolerances<T>) -> ComplexMatrix<T> {
    let n = v.nrows();
    kernel_basis(&(v - identity::<T>(n).map(|z| z * creal(at))), tol.gap)
}

pub fn pair_traces<T: Real>(p: &ComplexMatrix<T>, q: &ComplexMatrix<T>, tol: &Tolerances<T>) -> PairTraces<T> {
    let n = p.nrows();
    let (s, v) = reflections(p, q);
    let mut max_imag = T::zero();
    let mut powers = |m: &ComplexMatrix<T>| {
        let mut acc = identity::<T>(n);
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            acc = &acc * m;
            let t = trace(&acc);
            max_imag = max_imag.max(t.im.abs());
            out.push(t.re);
        }
        out
    };
    let vk = powers(&v);
    let ep = eigenspace(&v, T::one(), tol);
    let em = eigenspace(&v, -T::one(), tol);
    let ek_plus = powers(&(&s * &ep * ep.adjoint()));
    let ek_minus = powers(&(&s * &em * em.adjoint()));
    PairTraces { vk, ek_plus, ek_minus, max_imag }
}

/// Orthonormal bases of `H_λ` (Im λ > 0) and `H_λ̄`, grouped by `Re λ`.
struct GenericBlock<T: Real> {
    cos: T,
    upper: ComplexMatrix<T>,
    lower: ComplexMatrix<T>,
}

struct Decomposition<T: Real> {
    s: ComplexMatrix<T>,
    generic: Vec<GenericBlock<T>>,
    /// Inside `E_±`: bases of the `+1` and `−1` eigenspaces of `S`.
    plus: [ComplexMatrix<T>; 2],
    minus: [ComplexMatrix<T>; 2],
}

fn split_by_sign<T: Real>(s: &ComplexMatrix<T>, basis: &ComplexMatrix<T>) -> Result<[ComplexMatrix<T>; 2]> {
    let n = s.nrows();
    if basis.ncols() == 0 {
        return Ok([ComplexMatrix::zeros(n, 0), ComplexMatrix::zeros(n, 0)]);
    }
    let r = basis.adjoint() * s * basis;
    let (vals, vecs) = hermitian_eigen(&r);
    let pos: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] > T::zero()).collect();
    let neg: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] <= T::zero()).collect();
    Ok([basis * select_columns(&vecs, &pos), basis * select_columns(&vecs, &neg)])
}

fn decompose<T: Real>(p: &ComplexMatrix<T>, q: &ComplexMatrix<T>, tol: &Tolerances<T>) -> Result<Decomposition<T>> {
    let n = p.nrows();
    let (s, v) = reflections(p, q);
    let ep = eigenspace(&v, T::one(), tol);
    let em = eigenspace(&v, -T::one(), tol);
    let both = crate::linalg::hstack(n, &[&ep, &em]);
    let k = orthogonal_complement(&both, n);
    let mut generic = Vec::new();
    if k.ncols() > 0 {
        let half = creal(lit::<T>(0.5));
        let re_part = (&v + v.adjoint()).map(|z| z * half);
        let im_part = (&v - v.adjoint()).map(|z| z * cplx(T::zero(), -lit::<T>(0.5)));
        let (cosv, cvecs) = hermitian_eigen(&(k.adjoint() * &re_part * &k));
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for i in 0..cosv.len() {
            match groups.last_mut() {
                Some(g) if cosv[*g.last().unwrap()] - cosv[i] <= tol.gap => g.push(i),
                _ => groups.push(vec![i]),
            }
        }
        for g in groups {
            let x = &k * select_columns(&cvecs, &g);
            let (sv, svecs) = hermitian_eigen(&(x.adjoint() * &im_part * &x));
            let up: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] > T::zero()).collect();
            let down: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] <= T::zero()).collect();
            if up.len() != down.len() {
                return Err(Error::SpectrumMismatch(format!(
                    "eigenvalue pair at cos {:.6} has multiplicities {} and {}",
                    to_f64(cosv[g[0]]),
                    up.len(),
                    down.len()
                )));
            }
            let cos = g.iter().fold(T::zero(), |a, &i| a + cosv[i]) / lit(g.len() as f64);
            generic.push(GenericBlock { cos, upper: &x * select_columns(&svecs, &up), lower: &x * select_columns(&svecs, &down) });
        }
    }
    let plus = split_by_sign(&s, &ep)?;
    let minus = split_by_sign(&s, &em)?;
    Ok(Decomposition { s, generic, plus, minus })
}

/// A unitary `U` with `U P U* = P'` and `U Q U* = Q'`.
pub fn construct_unitary_pairform<T: Real>(
    p: &ComplexMatrix<T>,
    q: &ComplexMatrix<T>,
    p2: &ComplexMatrix<T>,
    q2: &ComplexMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<ComplexMatrix<T>> {
    let n = p.nrows();
    if [q.nrows(), p2.nrows(), q2.nrows()].iter().any(|&m| m != n) {
        return Err(Error::DimensionMismatch(n, p2.nrows()));
    }
    let a = decompose(p, q, tol)?;
    let b = decompose(p2, q2, tol)?;
    if a.generic.len() != b.generic.len() {
        return Err(Error::SpectrumMismatch(format!(
            "{} vs {} distinct eigenvalue pairs",
            a.generic.len(),
            b.generic.len()
        )));
    }
    let mut u = ComplexMatrix::<T>::zeros(n, n);
    let map = |from: &ComplexMatrix<T>, to: &ComplexMatrix<T>, what: &str| -> Result<ComplexMatrix<T>> {
        if from.ncols() != to.ncols() {
            return Err(Error::SpectrumMismatch(format!("{what}: dimension {} vs {}", from.ncols(), to.ncols())));
        }
        Ok(to * from.adjoint())
    };
    for (x, y) in a.generic.iter().zip(&b.generic) {
        if (x.cos - y.cos).abs() > tol.gap {
            return Err(Error::SpectrumMismatch(format!(
                "eigenvalue real parts {:.6} vs {:.6}",
                to_f64(x.cos),
                to_f64(y.cos)
            )));
        }
        let up = map(&x.upper, &y.upper, "eigenvalue pair")?;
        let down = &b.s * &up * &a.s * (&x.lower * x.lower.adjoint());
        u += up + down;
    }
    for k in 0..2 {
        u += map(&a.plus[k], &b.plus[k], "V = +1 eigenspace")?;
        u += map(&a.minus[k], &b.minus[k], "V = -1 eigenspace")?;
    }
    let res = unitarity_residual(&u)
        .max(frobenius(&(&u * p * u.adjoint() - p2)))
        .max(frobenius(&(&u * q * u.adjoint() - q2)));
    if res > tol.eq || !res.is_finite() {
        return Err(Error::ResidualTooLarge(to_f64(res)));
    }
    Ok(u)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_unitary, projector_pair, random_blocks, seeded, PairBlock};

    fn tol() -> Tolerances<f64> {
        Tolerances::default()
    }

    fn check(p: &ComplexMatrix<f64>, q: &ComplexMatrix<f64>, p2: &ComplexMatrix<f64>, q2: &ComplexMatrix<f64>) {
        let u = construct_unitary_pairform(p, q, p2, q2, &tol()).unwrap();
        assert!(frobenius(&(&u * p * u.adjoint() - p2)) < 1e-8);
        assert!(frobenius(&(&u * q * u.adjoint() - q2)) < 1e-8);
    }

    #[test]
    fn commuting_traces() {
        let blocks = [PairBlock::BothOne, PairBlock::POnly, PairBlock::BothZero];
        let (p, q) = projector_pair::<f64>(&blocks, &identity(3));
        // make Q = P
        let t = pair_traces(&p, &p, &tol());
        assert_eq!(t.vk.iter().map(|x| x.round() as i64).collect::<Vec<_>>(), vec![3, 3, 3]);
        let r = 2;
        let expect: Vec<f64> = (1..=3).map(|k| if k % 2 == 0 { 3.0 } else { (2 * r - 3) as f64 }).collect();
        for (a, b) in t.ek_plus.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(t.ek_minus.iter().all(|x| x.abs() < 1e-12));
        let _ = q;
    }

    #[test]
    fn traces_match_direct_powers() {
        let mut rng = seeded(2);
        let u = haar_unitary::<f64>(2, &mut rng);
        let (p, q) = projector_pair::<f64>(&[PairBlock::Angle(0.4)], &u);
        let t = pair_traces(&p, &q, &tol());
        let v = (p.map(|z| z * 2.0) - identity::<f64>(2)) * (q.map(|z| z * 2.0) - identity::<f64>(2));
        assert!((t.vk[0] - trace(&v).re).abs() < 1e-12);
        assert!((t.vk[1] - trace(&(&v * &v)).re).abs() < 1e-12);
        assert!((t.vk[0] - 2.0 * (0.8f64).cos()).abs() < 1e-12);
    }

    #[test]
    fn all_branch_types() {
        let mut rng = seeded(9);
        let blocks = [PairBlock::Angle(0.5), PairBlock::BothOne, PairBlock::QOnly, PairBlock::POnly, PairBlock::Angle(0.5)];
        let (p, q) = projector_pair::<f64>(&blocks, &haar_unitary(7, &mut rng));
        let w = haar_unitary::<f64>(7, &mut rng);
        check(&p, &q, &(&w * &p * w.adjoint()), &(&w * &q * w.adjoint()));
        check(&p, &q, &p, &q);
    }

    #[test]
    fn random_pairs_round_trip() {
        let mut rng = seeded(10);
        for n in 1..6 {
            for _ in 0..10 {
                let blocks = random_blocks(n, &mut rng);
                let (p, q) = projector_pair::<f64>(&blocks, &haar_unitary(n, &mut rng));
                let w = haar_unitary::<f64>(n, &mut rng);
                check(&p, &q, &(&w * &p * w.adjoint()), &(&w * &q * w.adjoint()));
            }
        }
    }

    #[test]
    fn different_angles_mismatch() {
        let (p, q) = projector_pair::<f64>(&[PairBlock::Angle(0.4)], &identity(2));
        let (p2, q2) = projector_pair::<f64>(&[PairBlock::Angle(0.6)], &identity(2));
        assert!(matches!(construct_unitary_pairform(&p, &q, &p2, &q2, &tol()), Err(Error::SpectrumMismatch(_))));
    }
}
