//! End-to-end class-F decision.

use crate::error::{Error, Result};
use crate::scalar::{to_f64, Real};
use crate::state::{conjugation_residual, eigen_decompose, DensityMatrix, EigenEnsemble};
use crate::tolerance::Tolerances;
use crate::verdict::{ClassTag, EquivalenceVerdict, FirstDiff, Stage};

use super::gauge::prepare_f;
use super::invariants::{compare_invariants_f, invariants_of_prepared};
use super::phases::{solve_phases, PhaseProblem};
use super::sigma::{SigmaOptions, SigmaRule};
use super::witness::{build_witness, check_residual, ensemble_residual};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DecideOptions {
    /// Permit path-ratio enumeration beyond the default size limit.
    pub allow_large: bool,
}

/// Decides local unitary equivalence of two states, both expected in class F.
pub fn decide_equivalence_f<T: Real>(
    a: &DensityMatrix<T>,
    b: &DensityMatrix<T>,
    opts: &DecideOptions,
    tol: &Tolerances<T>,
) -> Result<EquivalenceVerdict<T>> {
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch(a.dims().0 * a.dims().1, b.dims().0 * b.dims().1));
    }
    if a.local_dim().is_none() {
        return Ok(EquivalenceVerdict::out_of_class(Some(ClassTag::F), "subsystems of unequal dimension"));
    }
    let ea = eigen_decompose(a, tol.rank_cut, tol);
    let eb = eigen_decompose(b, tol.rank_cut, tol);
    decide_ensembles(a, b, &ea, &eb, opts, tol)
}

/// Same decision for caller-supplied decompositions, used as given. The
/// verdict is marked conditional: with a degenerate spectrum another choice
/// of eigenbasis could lead to a different answer.
pub fn decide_equivalence_f_supplied<T: Real>(
    a: &EigenEnsemble<T>,
    b: &EigenEnsemble<T>,
    opts: &DecideOptions,
    tol: &Tolerances<T>,
) -> Result<EquivalenceVerdict<T>> {
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch(a.dims().0, b.dims().0));
    }
    if a.local_dim().is_none() {
        return Ok(EquivalenceVerdict::out_of_class(Some(ClassTag::F), "subsystems of unequal dimension"));
    }
    let (ra, rb) = (a.to_density(), b.to_density());
    let mut v = decide_ensembles(&ra, &rb, a, b, opts, tol)?;
    v.conditional = true;
    Ok(v)
}

fn decide_ensembles<T: Real>(
    rho_a: &DensityMatrix<T>,
    rho_b: &DensityMatrix<T>,
    ea: &EigenEnsemble<T>,
    eb: &EigenEnsemble<T>,
    opts: &DecideOptions,
    tol: &Tolerances<T>,
) -> Result<EquivalenceVerdict<T>> {
    let tag = Some(ClassTag::F);
    if ea.rank() != eb.rank() {
        let d = FirstDiff::new(Stage::Rank, format!("{} vs {}", ea.rank(), eb.rank()), 1.0);
        return Ok(EquivalenceVerdict::inequivalent(tag, d));
    }
    for (l, (x, y)) in ea.mus().iter().zip(eb.mus()).enumerate() {
        if (*x - *y).abs() > tol.eq {
            let d = FirstDiff::new(Stage::Spectrum, format!("mu[{l}]"), to_f64((*x - *y).abs()));
            return Ok(EquivalenceVerdict::inequivalent(tag, d));
        }
    }
    // a supplied decomposition fixes the eigenbasis, so degeneracy is allowed
    if !ea.is_supplied() && (ea.is_degenerate() || eb.is_degenerate()) {
        return Ok(EquivalenceVerdict::out_of_class(tag, "degenerate spectrum"));
    }
    let (pa, pb) = match (prepare_f(ea, tol), prepare_f(eb, tol)) {
        (Ok(pa), Ok(pb)) => (pa, pb),
        (Err(Error::NotMultiplicityFree(g)), _) | (_, Err(Error::NotMultiplicityFree(g))) => {
            return Ok(EquivalenceVerdict::out_of_class(
                tag,
                format!("A0 is not multiplicity free (singular value gap {g:.3e})"),
            ));
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let mut warnings = pa.warnings.clone();
    warnings.extend(pb.warnings.iter().cloned());
    let sopts = SigmaOptions { rule: SigmaRule::EndpointMatched, allow_large: opts.allow_large };
    let ia = invariants_of_prepared(&pa, &sopts, tol)?;
    let ib = invariants_of_prepared(&pb, &sopts, tol)?;
    let report = compare_invariants_f(&ia, &ib, tol)?;
    if let Some(d) = report.first_diff {
        return Ok(EquivalenceVerdict::inequivalent(tag, d).with_warnings(warnings));
    }
    let problem = PhaseProblem::new(&pa.stack, &pb.stack, &pa.floating, tol)?;
    let phases = match solve_phases(&problem, tol) {
        Ok(p) => p,
        Err(Error::InconsistentPhases(r)) => {
            let d = FirstDiff::new(Stage::PhaseConsistency, "frame phase cycle", r);
            return Ok(EquivalenceVerdict::inequivalent(tag, d).with_warnings(warnings));
        }
        Err(e) => return Err(e),
    };
    let pair = build_witness(&pa.frame, &pb.frame, &phases, tol)?;
    check_residual(ensemble_residual(&pa.ensemble, &pb.ensemble, &pair, &phases), tol)?;
    let res = check_residual(conjugation_residual(rho_a, rho_b, &pair)?, tol)?;
    Ok(EquivalenceVerdict::equivalent(ClassTag::F, pair, res).with_warnings(warnings))
}
