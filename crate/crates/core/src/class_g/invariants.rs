//! Trace invariants of class G.

use crate::linalg::trace;
use crate::scalar::{to_f64, Real};
use crate::tolerance::Tolerances;
use crate::verdict::{FirstDiff, Stage};

use super::form::ProjectorPairForm;
use super::pairform::pair_traces;

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSetG<T: Real> {
    pub n: usize,
    pub tr_rho2: T,
    pub tr_a02: T,
    pub tr_a12: T,
    /// Projector weights `p`, `q`.
    pub p: T,
    pub q: T,
    /// `(hi, lo, rank of hi-space)` of `A_0` and `A_1`.
    pub a0_levels: (T, T, usize),
    pub a1_levels: (T, T, usize),
    pub vk: Vec<T>,
    pub ek_plus: Vec<T>,
    pub ek_minus: Vec<T>,
    pub warnings: Vec<String>,
}

pub fn compute_invariants_g<T: Real>(form: &ProjectorPairForm<T>, tol: &Tolerances<T>) -> InvariantSetG<T> {
    let t = pair_traces(form.p_proj(), form.q_proj(), tol);
    let mut warnings = Vec::new();
    if t.max_imag > tol.eq {
        warnings.push(format!("trace invariants carry imaginary parts up to {:.3e}", to_f64(t.max_imag)));
    }
    let [a0, a1] = &form.coeff_mats;
    InvariantSetG {
        n: form.n,
        tr_rho2: form.mu[0] * form.mu[0] + form.mu[1] * form.mu[1],
        tr_a02: trace(&(a0 * a0)).re,
        tr_a12: trace(&(a1 * a1)).re,
        p: form.p(),
        q: form.q(),
        a0_levels: (form.a0.hi, form.a0.lo, form.a0.rank),
        a1_levels: (form.a1.hi, form.a1.lo, form.a1.rank),
        vk: t.vk,
        ek_plus: t.ek_plus,
        ek_minus: t.ek_minus,
        warnings,
    }
}

/// First disagreement between two invariant sets, if any.
pub fn compare_invariants_g<T: Real>(a: &InvariantSetG<T>, b: &InvariantSetG<T>, tol: &Tolerances<T>) -> Option<FirstDiff> {
    let scalar = |stage, name: &str, x: T, y: T| {
        let d = (x - y).abs();
        (d > tol.eq).then(|| FirstDiff::new(stage, name, to_f64(d)))
    };
    let list = |stage, name: &str, x: &[T], y: &[T]| {
        x.iter().zip(y).enumerate().find_map(|(k, (u, v))| {
            let d = (*u - *v).abs();
            let scale = T::one().max(u.abs()).max(v.abs());
            (d > tol.eq * scale).then(|| FirstDiff::new(stage, format!("{name}[{}]", k + 1), to_f64(d)))
        })
    };
    if a.n != b.n {
        return Some(FirstDiff::new(Stage::Rank, format!("dimension {} vs {}", a.n, b.n), 1.0));
    }
    scalar(Stage::Spectrum, "tr_rho2", a.tr_rho2, b.tr_rho2)
        .or_else(|| scalar(Stage::ProjectorSpectra, "tr_a02", a.tr_a02, b.tr_a02))
        .or_else(|| scalar(Stage::ProjectorSpectra, "tr_a12", a.tr_a12, b.tr_a12))
        .or_else(|| scalar(Stage::ProjectorSpectra, "p", a.p, b.p))
        .or_else(|| scalar(Stage::ProjectorSpectra, "q", a.q, b.q))
        .or_else(|| levels("A0", a.a0_levels, b.a0_levels, tol))
        .or_else(|| levels("A1", a.a1_levels, b.a1_levels, tol))
        .or_else(|| list(Stage::PairTraces, "vk", &a.vk, &b.vk))
        .or_else(|| list(Stage::EigenspaceTraces, "ek_plus", &a.ek_plus, &b.ek_plus))
        .or_else(|| list(Stage::EigenspaceTraces, "ek_minus", &a.ek_minus, &b.ek_minus))
}

fn levels<T: Real>(name: &str, a: (T, T, usize), b: (T, T, usize), tol: &Tolerances<T>) -> Option<FirstDiff> {
    if a.2 != b.2 {
        return Some(FirstDiff::new(Stage::ProjectorSpectra, format!("{name} projector rank"), (a.2 as f64 - b.2 as f64).abs()));
    }
    let d = (a.0 - b.0).abs().max((a.1 - b.1).abs());
    (d > tol.eq).then(|| FirstDiff::new(Stage::ProjectorSpectra, format!("{name} eigenvalues"), to_f64(d)))
}
