//! Frame construction and eigenvector phase anchoring for class F.
//!
//! An eigen-decomposition only fixes each `ξ_l` up to a phase, and `D_l`
//! and the path ratios pick that phase up. For decompositions computed
//! from a state, every label's phase is pinned by a quantity that is
//! invariant under the frame gauge `b_ij ↦ (u_i / w_j) b_ij` but rotates
//! with `ξ_l`:
//!
//! 1. `Σ_i b_ii |b_ii|` over diagonal positions whose row and column
//!    phases are tied (`i < n`, or `i = n` when `λ_n > 0`);
//! 2. otherwise `Σ_ij b^{(l)}_ij conj(b^{(m)}_ij) |b^{(l)}_ij| |b^{(m)}_ij|`
//!    against already anchored labels `m`, repeated until nothing changes.
//!
//! Labels left over are *floating*; their phase is solved for together
//! with the frame phases when building a witness.

use crate::error::{Error, Result};
use crate::frame::{b_stack, is_multiplicity_free, svd_frame, BStack, SingularFrame};
use crate::scalar::{conj, cplx, modulus, to_f64, unit_phase, Real};
use crate::state::EigenEnsemble;
use crate::tolerance::Tolerances;

/// How eigenvector phases were fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseGauge {
    /// Phases taken as given by the caller.
    Supplied,
    /// Phases pinned by the covariant anchors described in the module docs.
    Anchored,
}

/// Everything the class-F invariants are computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedF<T: Real> {
    /// Ensemble after phase anchoring.
    pub ensemble: EigenEnsemble<T>,
    pub frame: SingularFrame<T>,
    pub stack: BStack<T>,
    pub gauge: PhaseGauge,
    /// 1-based labels whose phase could not be anchored.
    pub floating: Vec<usize>,
    pub warnings: Vec<String>,
}

impl<T: Real> PreparedF<T> {
    pub fn n(&self) -> usize {
        self.frame.dim()
    }

    pub fn last_singular_zero(&self, tol: &Tolerances<T>) -> bool {
        self.frame.last_is_zero(tol.zero)
    }

    /// Whether row and column phases are tied at diagonal position `i`.
    pub fn paired(&self, i: usize, tol: &Tolerances<T>) -> bool {
        i + 1 < self.n() || !self.last_singular_zero(tol)
    }

    pub fn is_floating(&self, label: usize) -> bool {
        self.floating.contains(&label)
    }
}

/// Builds the frame and B-stack for `ensemble`, anchoring phases unless
/// the ensemble was supplied by the caller.
pub fn prepare_f<T: Real>(ensemble: &EigenEnsemble<T>, tol: &Tolerances<T>) -> Result<PreparedF<T>> {
    let gauge = if ensemble.is_supplied() { PhaseGauge::Supplied } else { PhaseGauge::Anchored };
    prepare_f_with(ensemble, gauge, tol)
}

pub fn prepare_f_with<T: Real>(
    ensemble: &EigenEnsemble<T>,
    gauge: PhaseGauge,
    tol: &Tolerances<T>,
) -> Result<PreparedF<T>> {
    let (left, right) = ensemble.dims();
    if left != right {
        return Err(Error::BadDimension(format!("class F needs an n x n system, got {left}x{right}")));
    }
    let frame = svd_frame(&ensemble.coeff_mats()[0], tol)?;
    if !is_multiplicity_free(&frame, tol.sv_gap) {
        return Err(Error::NotMultiplicityFree(to_f64(frame.min_gap())));
    }
    let mut warnings = Vec::new();
    if frame.dim() > 1 && frame.min_gap() < tol.sv_gap * crate::scalar::lit(10.0) {
        warnings.push(format!(
            "singular values of A0 are nearly degenerate (min gap {:.3e})",
            to_f64(frame.min_gap())
        ));
    }
    if let Some(&last) = frame.lambdas.last() {
        if last > tol.zero && last < tol.zero * crate::scalar::lit(10.0) {
            warnings.push(format!("smallest singular value {:.3e} is close to zero", to_f64(last)));
        }
    }
    let stack = b_stack(&frame, ensemble)?;
    let mut prepared = PreparedF {
        ensemble: ensemble.clone(),
        frame,
        stack,
        gauge,
        floating: Vec::new(),
        warnings,
    };
    if gauge == PhaseGauge::Anchored {
        anchor_phases(&mut prepared, tol);
    }
    Ok(prepared)
}

fn anchor_phases<T: Real>(p: &mut PreparedF<T>, tol: &Tolerances<T>) {
    let n = p.n();
    let labels = p.stack.labels();
    let mut anchored = vec![false; labels];
    let mut factors = vec![cplx(T::one(), T::zero()); labels];

    for l in 0..labels {
        let b = &p.stack.mats[l];
        let mut s = cplx(T::zero(), T::zero());
        for i in (0..n).filter(|&i| p.paired(i, tol)) {
            s += b[(i, i)] * modulus(b[(i, i)]);
        }
        if modulus(s) > tol.anchor {
            factors[l] = conj(unit_phase(s));
            anchored[l] = true;
        }
    }
    apply_factors(p, &factors);

    loop {
        let mut progress = false;
        for l in 0..labels {
            if anchored[l] {
                continue;
            }
            let mut s = cplx(T::zero(), T::zero());
            for m in (0..labels).filter(|&m| anchored[m]) {
                let (bl, bm) = (&p.stack.mats[l], &p.stack.mats[m]);
                for (x, y) in bl.iter().zip(bm.iter()) {
                    s += *x * conj(*y) * (modulus(*x) * modulus(*y));
                }
            }
            if modulus(s) > tol.anchor {
                let mut f = vec![cplx(T::one(), T::zero()); labels];
                f[l] = conj(unit_phase(s));
                apply_factors(p, &f);
                anchored[l] = true;
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    p.floating = (0..labels).filter(|&l| !anchored[l]).map(|l| l + 1).collect();
    if !p.floating.is_empty() {
        p.warnings.push(format!("eigenvector phases of labels {:?} are floating", p.floating));
    }
}

fn apply_factors<T: Real>(p: &mut PreparedF<T>, factors: &[num_complex::Complex<T>]) {
    let mut mats = p.ensemble.coeff_mats().to_vec();
    for (l, &f) in factors.iter().enumerate() {
        mats[l + 1] = mats[l + 1].map(|z| z * f);
        p.stack.mats[l] = p.stack.mats[l].map(|z| z * f);
    }
    p.ensemble = p.ensemble.with_coeff_mats(mats);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_unitary, random_ensemble, random_phase, seeded};
    use crate::state::LocalUnitaryPair;

    #[test]
    fn anchoring_is_covariant() {
        let tol = Tolerances::<f64>::default();
        let mut rng = seeded(31);
        let ens = random_ensemble::<f64>(3, &[0.5, 0.3, 0.2], &mut rng);
        let pair = LocalUnitaryPair { u: haar_unitary(3, &mut rng), v: haar_unitary(3, &mut rng) };
        let moved = ens.apply_local(&pair).unwrap();
        // scramble eigenvector phases of the image
        let scrambled: Vec<_> = moved
            .coeff_mats()
            .iter()
            .map(|a| {
                let ph = random_phase::<f64>(&mut rng);
                a.map(|z| z * ph)
            })
            .collect();
        let moved = moved.with_coeff_mats(scrambled);
        let a = prepare_f(&ens, &tol).unwrap();
        let b = prepare_f(&moved, &tol).unwrap();
        assert!(a.floating.is_empty() && b.floating.is_empty());
        for l in 0..2 {
            for i in 0..2 {
                let d = a.stack.mats[l][(i, i)] - b.stack.mats[l][(i, i)];
                assert!(modulus(d) < 1e-10, "l={l} i={i} {:?} {:?}", a.stack.mats[l][(i, i)], b.stack.mats[l][(i, i)]);
            }
        }
    }

    #[test]
    fn supplied_gauge_keeps_phases() {
        let tol = Tolerances::<f64>::default();
        let ens = crate::fixtures::werner_ensemble::<f64>(0.5);
        let p = prepare_f(&ens, &tol).unwrap();
        assert_eq!(p.gauge, PhaseGauge::Supplied);
        assert_eq!(p.ensemble, ens);
        assert!(p.floating.is_empty());
    }

    #[test]
    fn werner_decomposition_anchored_has_floating_labels() {
        // as an automatic decomposition, B_2 and B_3 have no tied diagonal entries
        let tol = Tolerances::<f64>::default();
        let mut ens = crate::fixtures::werner_ensemble::<f64>(0.5);
        ens.set_supplied(false);
        let p = prepare_f(&ens, &tol).unwrap();
        assert_eq!(p.floating, vec![1, 2, 3]);
    }

    #[test]
    fn rejects_degenerate_a0() {
        let tol = Tolerances::<f64>::default();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a0 = crate::scalar::ComplexMatrix::<f64>::identity(2, 2).map(|z| z * s);
        let ens = EigenEnsemble::from_parts(vec![1.0], vec![a0], &tol).unwrap();
        assert!(matches!(prepare_f(&ens, &tol), Err(Error::NotMultiplicityFree(_))));
    }
}
