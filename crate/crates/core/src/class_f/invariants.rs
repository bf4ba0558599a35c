//! The complete class-F invariant set and its comparison.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{modulus, to_f64, Real};
use crate::tolerance::Tolerances;
use crate::verdict::{FirstDiff, Stage};
use crate::state::EigenEnsemble;

use super::gauge::{prepare_f, PhaseGauge, PreparedF};
use super::sigma::{check_size, enumerate, SigmaIndex, SigmaOptions, SigmaRule};

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSetF<T: Real> {
    pub n: usize,
    pub spectrum: Vec<T>,
    /// `|B_l|` for `l = 1..N`.
    pub b_abs: Vec<DMatrix<T>>,
    /// Singular values of `A_0`, descending.
    pub c_vec: Vec<T>,
    /// `(b^{(l)}_{ii})_{i < n}` for `l = 1..N`.
    pub d_vecs: Vec<Vec<Complex<T>>>,
    pub sigma: Vec<SigmaIndex>,
    pub i_values: Vec<Complex<T>>,
    pub rule: SigmaRule,
    pub gauge: PhaseGauge,
    /// 1-based labels whose eigenvector phase is not fixed.
    pub floating: Vec<usize>,
    pub warnings: Vec<String>,
}

impl<T: Real> InvariantSetF<T> {
    pub fn rank(&self) -> usize {
        self.spectrum.len()
    }

    pub fn labels(&self) -> usize {
        self.b_abs.len()
    }
}

pub fn compute_invariants_f<T: Real>(
    ensemble: &EigenEnsemble<T>,
    opts: &SigmaOptions,
    tol: &Tolerances<T>,
) -> Result<InvariantSetF<T>> {
    let prepared = prepare_f(ensemble, tol)?;
    invariants_of_prepared(&prepared, opts, tol)
}

pub fn invariants_of_prepared<T: Real>(
    p: &PreparedF<T>,
    opts: &SigmaOptions,
    tol: &Tolerances<T>,
) -> Result<InvariantSetF<T>> {
    check_size(&p.stack, opts)?;
    let n = p.n();
    let b_abs = p.stack.mats.iter().map(|b| b.map(modulus)).collect();
    let d_vecs = p.stack.mats.iter().map(|b| (0..n - 1).map(|i| b[(i, i)]).collect()).collect();
    let (sigma, i_values) = enumerate(&p.stack, opts.rule, p.last_singular_zero(tol), tol.zero);
    let mut warnings = p.warnings.clone();
    let borderline = p
        .stack
        .mats
        .iter()
        .flat_map(|b| b.iter())
        .filter(|z| {
            let m = modulus(**z);
            m > tol.zero && m < tol.zero * crate::scalar::lit(10.0)
        })
        .count();
    if borderline > 0 {
        warnings.push(format!("{borderline} B entries lie just above the zero threshold"));
    }
    Ok(InvariantSetF {
        n,
        spectrum: p.ensemble.mus().to_vec(),
        b_abs,
        c_vec: p.frame.lambdas.clone(),
        d_vecs,
        sigma,
        i_values,
        rule: opts.rule,
        gauge: p.gauge,
        floating: p.floating.clone(),
        warnings,
    })
}

/// Result of comparing two invariant sets.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiffReport {
    pub first_diff: Option<FirstDiff>,
    /// Path ratios actually compared.
    pub compared: usize,
    /// Path ratios skipped because they carry an unfixed eigenvector phase.
    pub skipped: usize,
}

impl DiffReport {
    pub fn is_equal(&self) -> bool {
        self.first_diff.is_none()
    }
}

/// Mixed absolute/relative closeness used for path ratios, which can be
/// large when denominators are small.
pub fn close_scaled<T: Real>(a: Complex<T>, b: Complex<T>, tol: T) -> bool {
    let scale = T::one().max(modulus(a)).max(modulus(b));
    modulus(a - b) <= tol * scale
}

/// Whether a ratio is free of unfixed label phases: every floating label
/// occurs equally often above and below the fraction bar.
pub fn is_balanced(idx: &SigmaIndex, floating: &[usize]) -> bool {
    floating.iter().all(|f| {
        idx.l_labels.iter().filter(|&&l| l == *f).count() == idx.m_labels.iter().filter(|&&m| m == *f).count()
    })
}

pub fn compare_invariants_f<T: Real>(
    a: &InvariantSetF<T>,
    b: &InvariantSetF<T>,
    tol: &Tolerances<T>,
) -> Result<DiffReport> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch(a.n, b.n));
    }
    let diff = |stage, loc: String, mag: T| {
        Ok(DiffReport { first_diff: Some(FirstDiff::new(stage, loc, to_f64(mag))), compared: 0, skipped: 0 })
    };
    if a.rank() != b.rank() {
        return diff(Stage::Rank, format!("{} vs {}", a.rank(), b.rank()), T::one());
    }
    for (l, (x, y)) in a.spectrum.iter().zip(&b.spectrum).enumerate() {
        if (*x - *y).abs() > tol.eq {
            return diff(Stage::Spectrum, format!("mu[{l}]"), (*x - *y).abs());
        }
    }
    for (i, (x, y)) in a.c_vec.iter().zip(&b.c_vec).enumerate() {
        if (*x - *y).abs() > tol.eq {
            return diff(Stage::SingularValues, format!("lambda[{}]", i + 1), (*x - *y).abs());
        }
    }
    for (l, (x, y)) in a.b_abs.iter().zip(&b.b_abs).enumerate() {
        for i in 0..a.n {
            for j in 0..a.n {
                let d = (x[(i, j)] - y[(i, j)]).abs();
                if d > tol.eq {
                    return diff(Stage::BModuli, format!("B{}[{},{}]", l + 1, i + 1, j + 1), d);
                }
            }
        }
    }
    if a.floating != b.floating {
        return diff(Stage::PhaseStructure, format!("floating {:?} vs {:?}", a.floating, b.floating), T::one());
    }
    for (l, (x, y)) in a.d_vecs.iter().zip(&b.d_vecs).enumerate() {
        if a.floating.contains(&(l + 1)) {
            continue;
        }
        for (i, (p, q)) in x.iter().zip(y).enumerate() {
            let d = modulus(*p - *q);
            if d > tol.eq {
                return diff(Stage::DiagonalEntries, format!("D{}[{}]", l + 1, i + 1), d);
            }
        }
    }
    if a.sigma.len() != b.sigma.len() || a.sigma != b.sigma {
        let at = a.sigma.iter().zip(&b.sigma).position(|(x, y)| x != y).unwrap_or(a.sigma.len().min(b.sigma.len()));
        return diff(Stage::PathRatios, format!("domain differs at entry {at}"), T::one());
    }
    let mut report = DiffReport::default();
    for (idx, (x, y)) in a.sigma.iter().zip(a.i_values.iter().zip(&b.i_values)) {
        if !is_balanced(idx, &a.floating) {
            report.skipped += 1;
            continue;
        }
        report.compared += 1;
        if !close_scaled(*x, *y, tol.eq) {
            return diff(Stage::PathRatios, idx.to_string(), modulus(*x - *y));
        }
    }
    Ok(report)
}
