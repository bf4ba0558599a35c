//! Multipartite states viewed through bipartite cuts.
//!
//! Two multipartite states are compared stage by stage: at each stage some
//! subsystems are traced out and the rest is split into two parties, and
//! the bipartite deciders are applied. Agreement at every stage is
//! reported as such; it is not claimed to imply equivalence under local
//! unitaries on every subsystem.

use rayon::prelude::*;

use crate::class_f::DecideOptions;
use crate::decide::decide_auto;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermiticity_residual, is_finite, trace};
use crate::scalar::{to_f64, ComplexMatrix, Real};
use crate::state::{validate_bipartite, DensityMatrix};
use crate::tolerance::Tolerances;
use crate::verdict::{EquivalenceVerdict, Verdict};

#[derive(Debug, Clone, PartialEq)]
pub struct MultipartiteState<T: Real> {
    dims: Vec<usize>,
    mat: ComplexMatrix<T>,
}

impl<T: Real> MultipartiteState<T> {
    pub fn new(dims: Vec<usize>, mat: ComplexMatrix<T>, tol: &Tolerances<T>) -> Result<Self> {
        let d: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) || mat.shape() != (d, d) {
            return Err(Error::BadDimension(format!("dims {dims:?} do not fit a {}x{} matrix", mat.nrows(), mat.ncols())));
        }
        if !is_finite(&mat) {
            return Err(Error::NonFinite);
        }
        let h = hermiticity_residual(&mat);
        if h > tol.herm {
            return Err(Error::NotHermitian(to_f64(h)));
        }
        let half = crate::scalar::creal(crate::scalar::lit::<T>(0.5));
        let mat = (&mat + mat.adjoint()).map(|z| z * half);
        let tr = trace(&mat).re;
        if (tr - T::one()).abs() > tol.herm {
            return Err(Error::TraceNotOne(to_f64(tr)));
        }
        let (vals, _) = hermitian_eigen(&mat);
        if let Some(&min) = vals.last() {
            if min < -tol.herm {
                return Err(Error::NotPsd(to_f64(min)));
            }
        }
        Ok(Self { dims, mat })
    }

    pub(crate) fn from_trusted(dims: Vec<usize>, mat: ComplexMatrix<T>) -> Self {
        Self { dims, mat }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    /// Conjugation by `⊗_k U_k`.
    pub fn apply_local(&self, unitaries: &[ComplexMatrix<T>]) -> Result<Self> {
        if unitaries.len() != self.dims.len() || unitaries.iter().zip(&self.dims).any(|(u, &d)| u.shape() != (d, d)) {
            return Err(Error::BadDimension("one unitary per subsystem, of matching size".into()));
        }
        let mut w = ComplexMatrix::<T>::identity(1, 1);
        for u in unitaries {
            w = w.kronecker(u);
        }
        Ok(Self { dims: self.dims.clone(), mat: &w * &self.mat * w.adjoint() })
    }
}

/// A split of the subsystems into two nonempty parties.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bipartition {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Bipartition {
    /// `left` against everything else among `parties` subsystems.
    pub fn new(left: &[usize], parties: usize) -> Result<Self> {
        let mut l = left.to_vec();
        l.sort_unstable();
        l.dedup();
        if l.len() != left.len() || l.iter().any(|&k| k >= parties) {
            return Err(Error::BadCut(format!("{left:?} is not a set of subsystems of {parties}")));
        }
        let right: Vec<usize> = (0..parties).filter(|k| !l.contains(k)).collect();
        if l.is_empty() || right.is_empty() {
            return Err(Error::BadCut("both sides of a cut must be nonempty".into()));
        }
        Ok(Self { left: l, right })
    }

    fn check(&self, parties: usize) -> Result<()> {
        let mut all: Vec<usize> = self.left.iter().chain(&self.right).copied().collect();
        all.sort_unstable();
        if self.left.is_empty() || self.right.is_empty() || all != (0..parties).collect::<Vec<_>>() {
            return Err(Error::BadCut(format!("{self:?} does not partition {parties} subsystems")));
        }
        Ok(())
    }
}

/// Bipartite view of a multipartite state.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteView<T: Real> {
    pub state: DensityMatrix<T>,
    /// The two sides have different dimensions, so the bipartite deciders,
    /// which need an n x n system, do not apply.
    pub unequal_cut: bool,
    /// Subsystem order used: left side ascending, then right side ascending.
    pub order: Vec<usize>,
}

/// Reorders the tensor factors of `mat` so that factor `k` of the result is
/// factor `order[k]` of the input.
pub fn permute_subsystems<T: Real>(mat: &ComplexMatrix<T>, dims: &[usize], order: &[usize]) -> ComplexMatrix<T> {
    let d: usize = dims.iter().product();
    let new_dims: Vec<usize> = order.iter().map(|&k| dims[k]).collect();
    let map: Vec<usize> = (0..d)
        .map(|flat| {
            let mut digits = vec![0; dims.len()];
            let mut rest = flat;
            for k in (0..dims.len()).rev() {
                digits[k] = rest % dims[k];
                rest /= dims[k];
            }
            order.iter().zip(&new_dims).fold(0, |acc, (&k, &nd)| acc * nd + digits[k])
        })
        .collect();
    let mut out = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            out[(map[r], map[c])] = mat[(r, c)];
        }
    }
    out
}

pub fn bipartition_view<T: Real>(s: &MultipartiteState<T>, cut: &Bipartition, tol: &Tolerances<T>) -> Result<BipartiteView<T>> {
    cut.check(s.parties())?;
    let order: Vec<usize> = cut.left.iter().chain(&cut.right).copied().collect();
    let mat = permute_subsystems(&s.mat, &s.dims, &order);
    let left: usize = cut.left.iter().map(|&k| s.dims[k]).product();
    let right: usize = cut.right.iter().map(|&k| s.dims[k]).product();
    let state = validate_bipartite(mat, left, right, tol)?;
    Ok(BipartiteView { state, unequal_cut: left != right, order })
}

/// Partial trace over the listed subsystems; the rest keep their order.
pub fn reduce_trace<T: Real>(s: &MultipartiteState<T>, traced: &[usize]) -> Result<MultipartiteState<T>> {
    let m = s.parties();
    let mut t = traced.to_vec();
    t.sort_unstable();
    t.dedup();
    if t.len() != traced.len() || t.iter().any(|&k| k >= m) {
        return Err(Error::BadCut(format!("cannot trace {traced:?} out of {m} subsystems")));
    }
    if t.len() == m {
        return Err(Error::BadCut("cannot trace out every subsystem".into()));
    }
    if t.is_empty() {
        return Ok(s.clone());
    }
    let kept: Vec<usize> = (0..m).filter(|k| !t.contains(k)).collect();
    let order: Vec<usize> = kept.iter().chain(&t).copied().collect();
    let mat = permute_subsystems(&s.mat, &s.dims, &order);
    let inner: usize = t.iter().map(|&k| s.dims[k]).product();
    let outer: usize = kept.iter().map(|&k| s.dims[k]).product();
    let out = ComplexMatrix::from_fn(outer, outer, |a, b| {
        (0..inner).fold(crate::scalar::creal(T::zero()), |acc, x| acc + mat[(a * inner + x, b * inner + x)])
    });
    Ok(MultipartiteState::from_trusted(kept.iter().map(|&k| s.dims[k]).collect(), out))
}

/// Trace out `traced`, then cut the remainder. Subsystem labels in `cut`
/// refer to the original state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub traced: Vec<usize>,
    pub cut: Bipartition,
}

impl Stage {
    pub fn label(&self) -> String {
        let side = |v: &[usize]| v.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
        if self.traced.is_empty() {
            format!("{}|{}", side(&self.cut.left), side(&self.cut.right))
        } else {
            format!("tr[{}] {}|{}", side(&self.traced), side(&self.cut.left), side(&self.cut.right))
        }
    }
}

/// `0 | 1..m`, then trace 0 and cut `1 | 2..m`, and so on.
pub fn peeling_stages(parties: usize) -> Vec<Stage> {
    (0..parties.saturating_sub(1))
        .map(|k| Stage {
            traced: (0..k).collect(),
            cut: Bipartition { left: vec![k], right: (k + 1..parties).collect() },
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageReport<T: Real> {
    pub stage: Stage,
    pub unequal_cut: bool,
    pub verdict: Option<EquivalenceVerdict<T>>,
    /// Set when the stage could not be evaluated.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StagedVerdict<T: Real> {
    pub stages: Vec<StageReport<T>>,
    /// Every stage decided and found equivalent.
    pub all_stages_equivalent: bool,
    /// Some stage decided inequivalent; this does settle inequivalence.
    pub any_inequivalent: bool,
    pub conclusion: String,
}

fn run_stage<T: Real>(
    a: &MultipartiteState<T>,
    b: &MultipartiteState<T>,
    stage: &Stage,
    opts: &DecideOptions,
    tol: &Tolerances<T>,
) -> Result<(bool, EquivalenceVerdict<T>)> {
    let ra = reduce_trace(a, &stage.traced)?;
    let rb = reduce_trace(b, &stage.traced)?;
    let kept: Vec<usize> = (0..a.parties()).filter(|k| !stage.traced.contains(k)).collect();
    let pos = |k: &usize| kept.iter().position(|x| x == k).ok_or_else(|| Error::BadCut(format!("subsystem {k} was traced out")));
    let left = stage.cut.left.iter().map(pos).collect::<Result<Vec<_>>>()?;
    let right = stage.cut.right.iter().map(pos).collect::<Result<Vec<_>>>()?;
    let cut = Bipartition { left, right };
    let va = bipartition_view(&ra, &cut, tol)?;
    let vb = bipartition_view(&rb, &cut, tol)?;
    Ok((va.unequal_cut, decide_auto(&va.state, &vb.state, opts, tol)?))
}

/// Applies the bipartite deciders at every stage. Stages are independent;
/// a failing stage does not stop the others.
pub fn staged_equivalence<T: Real>(
    a: &MultipartiteState<T>,
    b: &MultipartiteState<T>,
    stages: &[Stage],
    opts: &DecideOptions,
    tol: &Tolerances<T>,
) -> Result<StagedVerdict<T>> {
    if a.dims != b.dims {
        return Err(Error::BadDimension(format!("dims {:?} vs {:?}", a.dims, b.dims)));
    }
    let reports: Vec<StageReport<T>> = stages
        .par_iter()
        .map(|stage| match run_stage(a, b, stage, opts, tol) {
            Ok((unequal_cut, v)) => StageReport { stage: stage.clone(), unequal_cut, verdict: Some(v), error: None },
            Err(e) => StageReport { stage: stage.clone(), unequal_cut: false, verdict: None, error: Some(e.to_string()) },
        })
        .collect();
    let verdicts = |want: Verdict| reports.iter().filter(|r| r.verdict.as_ref().is_some_and(|v| v.verdict == want)).count();
    let equivalent = verdicts(Verdict::Equivalent);
    let inequivalent = verdicts(Verdict::Inequivalent);
    let all_stages_equivalent = !reports.is_empty() && equivalent == reports.len();
    let conclusion = if inequivalent > 0 {
        format!("inequivalent: {inequivalent} of {} stages separate the states", reports.len())
    } else if all_stages_equivalent {
        format!(
            "equivalent at all {} stages of the staged bipartite criterion; equivalence under local unitaries on every subsystem is not asserted",
            reports.len()
        )
    } else {
        format!("undecided: {equivalent} of {} stages equivalent, the others out of class or failed", reports.len())
    };
    Ok(StagedVerdict { stages: reports, all_stages_equivalent, any_inequivalent: inequivalent > 0, conclusion })
}
