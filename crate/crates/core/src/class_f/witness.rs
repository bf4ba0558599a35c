//! Local unitaries assembled from two frames and a phase assignment.

use crate::error::{Error, Result};
use crate::frame::SingularFrame;
use crate::linalg::{diag_matrix, frobenius};
use crate::scalar::{creal, to_f64, Real};
use crate::state::{EigenEnsemble, LocalUnitaryPair};
use crate::tolerance::Tolerances;

use super::phases::PhaseAssignment;

/// `U = ψ_B diag(u) ψ_A*`, `V = η_B diag(u_1..u_{n-1}, v_n) η_A*`.
pub fn build_witness<T: Real>(
    frame_a: &SingularFrame<T>,
    frame_b: &SingularFrame<T>,
    phases: &PhaseAssignment<T>,
    tol: &Tolerances<T>,
) -> Result<LocalUnitaryPair<T>> {
    if frame_a.dim() != frame_b.dim() || phases.u.len() != frame_a.dim() {
        return Err(Error::DimensionMismatch(frame_a.dim(), frame_b.dim()));
    }
    for (x, y) in frame_a.lambdas.iter().zip(&frame_b.lambdas) {
        if (*x - *y).abs() > tol.eq {
            return Err(Error::Invalid("frames have different singular values".into()));
        }
    }
    let u = &frame_b.psi * diag_matrix(&phases.u) * frame_a.psi.adjoint();
    let v = &frame_b.eta * diag_matrix(&phases.w()) * frame_a.eta.adjoint();
    Ok(LocalUnitaryPair { u, v })
}

/// Largest `‖θ_l U A_l V* − A'_l‖` over all labels (`θ_0 = 1`).
pub fn ensemble_residual<T: Real>(
    a: &EigenEnsemble<T>,
    b: &EigenEnsemble<T>,
    pair: &LocalUnitaryPair<T>,
    phases: &PhaseAssignment<T>,
) -> T {
    let vh = pair.v.adjoint();
    a.coeff_mats().iter().zip(b.coeff_mats()).enumerate().fold(T::zero(), |acc, (l, (x, y))| {
        let theta = if l == 0 { creal(T::one()) } else { phases.label_phases[l - 1] };
        let moved = (&pair.u * x * &vh).map(|z| z * theta);
        acc.max(frobenius(&(moved - y)))
    })
}

pub(crate) fn check_residual<T: Real>(res: T, tol: &Tolerances<T>) -> Result<T> {
    if res > tol.eq || !res.is_finite() {
        Err(Error::ResidualTooLarge(to_f64(res)))
    } else {
        Ok(res)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class_f::gauge::prepare_f;
    use crate::class_f::phases::{solve_phases, PhaseProblem};
    use crate::fixtures::werner_ensemble;
    use crate::scalar::cis;

    #[test]
    fn werner_with_planted_phases() {
        // diag(u) ⊗ conj(diag(w)) keeps the Werner decomposition in shape
        let tol = Tolerances::<f64>::default();
        let ens = werner_ensemble::<f64>(0.5);
        let d = diag_matrix(&[cis(0.7), cis(-0.4)]);
        let pair = LocalUnitaryPair { u: d.clone(), v: d };
        let moved = ens.apply_local(&pair).unwrap();
        let a = prepare_f(&ens, &tol).unwrap();
        let b = prepare_f(&moved, &tol).unwrap();
        let prob = PhaseProblem::new(&a.stack, &b.stack, &[], &tol).unwrap();
        let ph = solve_phases(&prob, &tol).unwrap();
        let w = build_witness(&a.frame, &b.frame, &ph, &tol).unwrap();
        assert!(ensemble_residual(&a.ensemble, &b.ensemble, &w, &ph) < 1e-12);
        assert!(w.unitarity_residual() < 1e-12);
    }

    #[test]
    fn identical_frames_give_identity() {
        let tol = Tolerances::<f64>::default();
        let mut rng = crate::random::seeded(3);
        let ens = crate::random::random_ensemble::<f64>(3, &[0.7, 0.3], &mut rng);
        let a = prepare_f(&ens, &tol).unwrap();
        let prob = PhaseProblem::new(&a.stack, &a.stack, &[], &tol).unwrap();
        let ph = solve_phases(&prob, &tol).unwrap();
        let w = build_witness(&a.frame, &a.frame, &ph, &tol).unwrap();
        let id = crate::linalg::identity::<f64>(3);
        assert!(frobenius(&(w.u - &id)) < 1e-12 && frobenius(&(w.v - id)) < 1e-12);
    }
}
