//! Seeded property suites over random instances, run case-parallel.
//!
//! Every case draws its instance from `case_seed(seed, index)`, so a
//! suite's outcome depends only on `(seed, cases)`.

use rand::Rng;
use rayon::prelude::*;

use crate::class_f::{
    compare_invariants_f, compute_invariants_f, decide_equivalence_f, DecideOptions, SigmaIndex, SigmaOptions,
};
use crate::class_g::decide_equivalence_g;
use crate::error::{Error, Result};
use crate::frame::{is_multiplicity_free, perturb_to_multiplicity_free, svd_frame};
use crate::instances::{cross_class_ensemble, degenerate_a0_ensemble, perturb, Perturbation};
use crate::linalg::operator_norm;
use crate::random::{case_seed, generate, haar_unitary, random_class_g, seeded, RandomSpec, StateClass};
use crate::scalar::cplx;
use crate::state::{conjugation_residual, LocalUnitaryPair};
use crate::tolerance::Tolerances;
use crate::verdict::{Stage, Verdict};

pub const SUITES: [&str; 5] = ["round_trip", "negative", "witness_residual", "cross_class", "perturbation_bound"];

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub cases: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
    /// Test hook: negates the path ratios on the transformed side of every
    /// round-trip case, so that suite must fail at `path_ratios`.
    pub inject_bug: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { cases: 20, seed: 0, jobs: None, inject_bug: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub passed: usize,
    /// `(case index, message)` of the first failure.
    pub first_failure: Option<(usize, String)>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.cases
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuiteSummary {
    pub reports: Vec<SuiteReport>,
}

impl SuiteSummary {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(SuiteReport::ok)
    }

    /// Tab-separated table with a header row; no data rows when no cases ran.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("suite\tcases\tpassed\tfailed\tstatus\tfirst_failure\n");
        for r in &self.reports {
            let detail = r
                .first_failure
                .as_ref()
                .map(|(c, m)| format!("case {c}: {}", m.replace(['\t', '\n'], " ")))
                .unwrap_or_default();
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                r.name,
                r.cases,
                r.passed,
                r.cases - r.passed,
                if r.ok() { "PASS" } else { "FAIL" },
                detail
            ));
        }
        out
    }
}

type CaseResult = std::result::Result<(), String>;

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn random_pair(n: usize, rng: &mut impl Rng, tol: &Tolerances<f64>) -> Result<LocalUnitaryPair<f64>> {
    LocalUnitaryPair::new(haar_unitary(n, rng), haar_unitary(n, rng), tol)
}

fn f_spec(case: usize, seed: u64) -> RandomSpec {
    RandomSpec { n: 2 + case % 3, rank: 2 + (case / 3) % 2, seed, class: StateClass::F, gap: 1e-5 }
}

fn round_trip(case: usize, seed: u64, inject_bug: bool, tol: &Tolerances<f64>) -> CaseResult {
    let (rho, ens) = generate::<f64>(&f_spec(case, seed)).map_err(fail)?;
    let mut rng = seeded(seed ^ 1);
    let pair = random_pair(rho.local_dim().unwrap(), &mut rng, tol).map_err(fail)?;
    let moved = ens.apply_local(&pair).map_err(fail)?;
    let opts = SigmaOptions::default();
    let a = compute_invariants_f(&ens, &opts, tol).map_err(fail)?;
    let mut b = compute_invariants_f(&moved, &opts, tol).map_err(fail)?;
    if inject_bug {
        if b.i_values.is_empty() {
            b.sigma.push(SigmaIndex { i_path: vec![1, 2], j_path: vec![1, 2], l_labels: vec![1], m_labels: vec![1] });
            b.i_values.push(cplx(2.0, 0.0));
        }
        b.i_values.iter_mut().for_each(|z| *z = -*z);
    }
    let report = compare_invariants_f(&a, &b, tol).map_err(fail)?;
    if let Some(d) = report.first_diff {
        return Err(format!("invariants differ at {} ({}, {:.3e})", d.stage, d.location, d.magnitude));
    }
    let v = decide_equivalence_f(&rho, &moved.to_density(), &DecideOptions::default(), tol).map_err(fail)?;
    match (v.verdict, v.residual) {
        (Verdict::Equivalent, Some(r)) if r <= tol.eq => Ok(()),
        _ => Err(format!("verdict {} residual {:?}", v.verdict.name(), v.residual)),
    }
}

fn negative(case: usize, seed: u64, tol: &Tolerances<f64>) -> CaseResult {
    let kind = Perturbation::ALL[case % 3];
    let expected = [Stage::Spectrum, Stage::SingularValues, Stage::BModuli][case % 3];
    let (rho, ens) = generate::<f64>(&f_spec(case / 3, seed)).map_err(fail)?;
    let near = perturb(&ens, kind, 1e-3, tol).map_err(fail)?;
    let mut rng = seeded(seed ^ 2);
    let pair = random_pair(rho.local_dim().unwrap(), &mut rng, tol).map_err(fail)?;
    let other = near.apply_local(&pair).map_err(fail)?.to_density();
    let v = decide_equivalence_f(&rho, &other, &DecideOptions::default(), tol).map_err(fail)?;
    match (v.verdict, v.stage()) {
        (Verdict::Inequivalent, Some(s)) if s == expected => Ok(()),
        (verdict, s) => Err(format!("{kind:?}: got {} at {:?}, expected {expected}", verdict.name(), s)),
    }
}

fn witness_residual(case: usize, seed: u64, tol: &Tolerances<f64>) -> CaseResult {
    let mut rng = seeded(seed);
    let n = 2 + case % 3;
    let (ens, pair) = if case % 2 == 0 {
        let (_, ens) = generate::<f64>(&RandomSpec { n, ..f_spec(case / 2, seed) }).map_err(fail)?;
        (ens, random_pair(n, &mut rng, tol).map_err(fail)?)
    } else {
        let ens = random_class_g::<f64>(n, 1e-3, &mut rng);
        let u = haar_unitary(n, &mut rng);
        (ens, LocalUnitaryPair::new(u.clone(), u, tol).map_err(fail)?)
    };
    let a = ens.to_density();
    let b = ens.apply_local(&pair).map_err(fail)?.to_density();
    let v = if case % 2 == 0 {
        decide_equivalence_f(&a, &b, &DecideOptions::default(), tol)
    } else {
        decide_equivalence_g(&a, &b, None, tol)
    }
    .map_err(fail)?;
    let w = v.witness.as_ref().ok_or_else(|| format!("no witness ({})", v.verdict.name()))?;
    let r = conjugation_residual(&a, &b, w).map_err(fail)?;
    if r <= tol.eq && w.unitarity_residual() <= tol.eq {
        Ok(())
    } else {
        Err(format!("witness residual {r:.3e}"))
    }
}

fn cross_class(case: usize, seed: u64, tol: &Tolerances<f64>) -> CaseResult {
    let mut rng = seeded(seed);
    let mu = 0.55 + 0.4 * rng.random::<f64>();
    let ens = cross_class_ensemble::<f64>(mu, &mut rng);
    let a = ens.to_density();
    let b = if case % 2 == 0 {
        let u = haar_unitary(2, &mut rng);
        ens.apply_local(&LocalUnitaryPair::new(u.clone(), u, tol).map_err(fail)?).map_err(fail)?.to_density()
    } else {
        cross_class_ensemble::<f64>(mu - 0.05, &mut rng).to_density()
    };
    let f = decide_equivalence_f(&a, &b, &DecideOptions::default(), tol).map_err(fail)?;
    let g = decide_equivalence_g(&a, &b, None, tol).map_err(fail)?;
    let expected = if case % 2 == 0 { Verdict::Equivalent } else { Verdict::Inequivalent };
    if f.verdict == g.verdict && f.verdict == expected {
        Ok(())
    } else {
        Err(format!("F says {}, G says {}", f.verdict.name(), g.verdict.name()))
    }
}

fn perturbation_bound(case: usize, seed: u64, tol: &Tolerances<f64>) -> CaseResult {
    let mut rng = seeded(seed);
    let n = 2 + case % 3;
    let (ens, group) = degenerate_a0_ensemble::<f64>(n, 2, &mut rng);
    let eps = 1e-4 * (1.0 + rng.random::<f64>());
    let out = perturb_to_multiplicity_free(&ens, eps, tol).map_err(fail)?;
    let dist = operator_norm(&(ens.to_matrix() - out.to_matrix()));
    let bound = 2.0 * (n as f64).powi(3) * eps;
    let frame = svd_frame(&out.coeff_mats()[0], tol).map_err(fail)?;
    if dist > bound {
        return Err(format!("distance {dist:.3e} exceeds {bound:.3e}"));
    }
    let need = eps / (2.0 * group as f64);
    if !is_multiplicity_free(&frame, tol.sv_gap) || frame.min_gap() < need * (1.0 - 1e-9) {
        return Err(format!("min gap {:.3e} below {need:.3e}", frame.min_gap()));
    }
    Ok(())
}

fn run_one(name: &'static str, cfg: &SuiteConfig, tol: &Tolerances<f64>) -> SuiteReport {
    let results: Vec<CaseResult> = (0..cfg.cases)
        .into_par_iter()
        .map(|case| {
            let seed = case_seed(cfg.seed, case as u64);
            match name {
                "round_trip" => round_trip(case, seed, cfg.inject_bug, tol),
                "negative" => negative(case, seed, tol),
                "witness_residual" => witness_residual(case, seed, tol),
                "cross_class" => cross_class(case, seed, tol),
                _ => perturbation_bound(case, seed, tol),
            }
        })
        .collect();
    let first_failure = results.iter().enumerate().find_map(|(i, r)| r.as_ref().err().map(|m| (i, m.clone())));
    SuiteReport { name, cases: cfg.cases, passed: results.iter().filter(|r| r.is_ok()).count(), first_failure }
}

/// Runs every suite. With `cases == 0` the summary is empty.
pub fn run_suites(cfg: &SuiteConfig, tol: &Tolerances<f64>) -> Result<SuiteSummary> {
    if cfg.cases == 0 {
        return Ok(SuiteSummary::default());
    }
    let work = || SuiteSummary { reports: SUITES.iter().map(|&s| run_one(s, cfg, tol)).collect() };
    match cfg.jobs {
        None => Ok(work()),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
            Ok(pool.install(work))
        }
    }
}
