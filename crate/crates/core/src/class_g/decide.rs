//! End-to-end class-G decision, optionally after a fixed local change of frame.

use crate::error::{Error, Result};
use crate::linalg::frobenius;
use crate::scalar::{to_f64, Real};
use crate::state::{apply_local, conjugation_residual, eigen_decompose, DensityMatrix, LocalUnitaryPair};
use crate::tolerance::Tolerances;
use crate::verdict::{ClassTag, EquivalenceVerdict, FirstDiff, Stage};

use super::form::detect_class_g;
use super::invariants::{compare_invariants_g, compute_invariants_g};
use super::pairform::construct_unitary_pairform;

/// Decides equivalence of `a` and `b` as class-G states. With `w`, the
/// states are first conjugated by `w` (both must land in class G), and the
/// returned witness acts on the original states.
pub fn decide_equivalence_g<T: Real>(
    a: &DensityMatrix<T>,
    b: &DensityMatrix<T>,
    w: Option<&LocalUnitaryPair<T>>,
    tol: &Tolerances<T>,
) -> Result<EquivalenceVerdict<T>> {
    let tag = Some(ClassTag::G);
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch(a.dims().0 * a.dims().1, b.dims().0 * b.dims().1));
    }
    if a.local_dim().is_none() {
        return Ok(EquivalenceVerdict::out_of_class(tag, "subsystems of unequal dimension"));
    }
    let (ta, tb) = match w {
        Some(w) => (apply_local(a, w)?, apply_local(b, w)?),
        None => (a.clone(), b.clone()),
    };
    let ea = eigen_decompose(&ta, tol.rank_cut, tol);
    let eb = eigen_decompose(&tb, tol.rank_cut, tol);
    if ea.rank() != eb.rank() {
        let d = FirstDiff::new(Stage::Rank, format!("{} vs {}", ea.rank(), eb.rank()), 1.0);
        return Ok(EquivalenceVerdict::inequivalent(tag, d));
    }
    if ea.rank() != 2 {
        return Ok(EquivalenceVerdict::out_of_class(tag, format!("rank {} (class G is rank two)", ea.rank())));
    }
    if ea.is_degenerate() || eb.is_degenerate() {
        return Ok(EquivalenceVerdict::out_of_class(tag, "degenerate spectrum"));
    }
    let (fa, fb) = match (detect_class_g(&ea, tol), detect_class_g(&eb, tol)) {
        (Ok(fa), Ok(fb)) => (fa, fb),
        (Err(e), _) | (_, Err(e)) => match e {
            Error::NotProjectorForm(_) | Error::AmbiguousForm(_) | Error::NotRankTwo(_) => {
                return Ok(EquivalenceVerdict::out_of_class(tag, e.to_string()));
            }
            e => return Err(e),
        },
    };
    let ia = compute_invariants_g(&fa, tol);
    let ib = compute_invariants_g(&fb, tol);
    let mut warnings = ia.warnings.clone();
    warnings.extend(ib.warnings.iter().cloned());
    if let Some(d) = compare_invariants_g(&ia, &ib, tol) {
        return Ok(EquivalenceVerdict::inequivalent(tag, d).with_warnings(warnings));
    }
    let u = match construct_unitary_pairform(fa.p_proj(), fa.q_proj(), fb.p_proj(), fb.q_proj(), tol) {
        Ok(u) => u,
        Err(Error::SpectrumMismatch(msg)) => {
            let d = FirstDiff::new(Stage::Construction, msg, 1.0);
            return Ok(EquivalenceVerdict::inequivalent(tag, d).with_warnings(warnings));
        }
        Err(e) => return Err(e),
    };
    let inner = LocalUnitaryPair { u: u.clone(), v: u };
    for (x, y) in fa.coeff_mats.iter().zip(&fb.coeff_mats) {
        let r = frobenius(&(&inner.u * x * inner.v.adjoint() - y));
        if r > tol.eq {
            return Err(Error::ResidualTooLarge(to_f64(r)));
        }
    }
    let pair = match w {
        Some(w) => w.then(&inner).then(&w.inverse()),
        None => inner,
    };
    let res = conjugation_residual(a, b, &pair)?;
    if res > tol.eq || !res.is_finite() {
        return Err(Error::ResidualTooLarge(to_f64(res)));
    }
    Ok(EquivalenceVerdict::equivalent(ClassTag::G, pair, res).with_warnings(warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_unitary, random_class_g, seeded};
    use crate::verdict::Verdict;

    #[test]
    fn planted_pair_equivalent() {
        let tol = Tolerances::<f64>::default();
        let mut rng = seeded(21);
        let ens = random_class_g::<f64>(3, 1e-2, &mut rng);
        let rho = ens.to_density();
        let u = haar_unitary::<f64>(3, &mut rng);
        let moved = apply_local(&rho, &LocalUnitaryPair { u: u.clone(), v: u }).unwrap();
        let v = decide_equivalence_g(&rho, &moved, None, &tol).unwrap();
        assert_eq!(v.verdict, Verdict::Equivalent, "{:?}", v);
        assert!(v.residual.unwrap() < 1e-8);
    }

    #[test]
    fn generic_rank_two_out_of_class() {
        let tol = Tolerances::<f64>::default();
        let ens = crate::random::random_ensemble::<f64>(3, &[0.7, 0.3], &mut seeded(2));
        let rho = ens.to_density();
        let v = decide_equivalence_g(&rho, &rho, None, &tol).unwrap();
        assert_eq!(v.verdict, Verdict::OutOfClass);
    }

    #[test]
    fn rank_mismatch_inequivalent() {
        let tol = Tolerances::<f64>::default();
        let a = random_class_g::<f64>(3, 1e-2, &mut seeded(3)).to_density();
        let b = crate::random::random_ensemble::<f64>(3, &[0.5, 0.3, 0.2], &mut seeded(4)).to_density();
        let v = decide_equivalence_g(&a, &b, None, &tol).unwrap();
        assert_eq!(v.stage(), Some(Stage::Rank));
    }
}
