//! JSON file formats (f64).
//!
//! Matrices: `{"rows": r, "cols": c, "re": [[..]], "im": [[..]]}`.
//! Bipartite state files add `"n"`; multipartite files add `"dims"`.
//! An optional `"ensemble": {"mus": [..], "coeff_mats": [matrix, ..]}`
//! supplies a fixed decomposition.

use serde::{Deserialize, Serialize};

use crate::class_f::{InvariantSetF, PhaseGauge};
use crate::class_g::InvariantSetG;
use crate::error::{Error, Result};
use crate::multipartite::MultipartiteState;
use crate::scalar::{cplx, ComplexMatrix};
use crate::state::{validate_density, DensityMatrix, EigenEnsemble, LocalUnitaryPair};
use crate::tolerance::Tolerances;
use crate::verdict::EquivalenceVerdict;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix<f64>) -> Self {
        let (rows, cols) = m.shape();
        let grid = |f: fn(&num_complex::Complex<f64>) -> f64| (0..rows).map(|i| (0..cols).map(|j| f(&m[(i, j)])).collect()).collect();
        Self { rows, cols, re: grid(|z| z.re), im: grid(|z| z.im) }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix<f64>> {
        let ok = |g: &Vec<Vec<f64>>| g.len() == self.rows && g.iter().all(|r| r.len() == self.cols);
        if !ok(&self.re) || !ok(&self.im) {
            return Err(Error::BadDimension(format!("matrix data does not match {}x{}", self.rows, self.cols)));
        }
        Ok(ComplexMatrix::from_fn(self.rows, self.cols, |i, j| cplx(self.re[i][j], self.im[i][j])))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleJson {
    pub mus: Vec<f64>,
    pub coeff_mats: Vec<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[serde(flatten)]
    pub matrix: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleJson>,
}

/// A state file after validation.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedState {
    Bipartite { state: DensityMatrix<f64>, ensemble: Option<EigenEnsemble<f64>> },
    Multipartite(MultipartiteState<f64>),
}

impl StateFile {
    pub fn bipartite(state: &DensityMatrix<f64>, ensemble: Option<&EigenEnsemble<f64>>) -> Self {
        Self {
            n: state.local_dim(),
            dims: None,
            matrix: MatrixJson::from_matrix(state.matrix()),
            ensemble: ensemble.map(|e| EnsembleJson {
                mus: e.mus().to_vec(),
                coeff_mats: e.coeff_mats().iter().map(MatrixJson::from_matrix).collect(),
            }),
        }
    }

    pub fn multipartite(state: &MultipartiteState<f64>) -> Self {
        Self { n: None, dims: Some(state.dims().to_vec()), matrix: MatrixJson::from_matrix(state.matrix()), ensemble: None }
    }

    pub fn load(&self, tol: &Tolerances<f64>) -> Result<LoadedState> {
        let mat = self.matrix.to_matrix()?;
        match (self.n, &self.dims) {
            (Some(n), None) => {
                let state = validate_density(mat, n, tol)?;
                let ensemble = match &self.ensemble {
                    None => None,
                    Some(e) => {
                        let mats = e.coeff_mats.iter().map(MatrixJson::to_matrix).collect::<Result<Vec<_>>>()?;
                        let ens = EigenEnsemble::from_parts(e.mus.clone(), mats, tol)?;
                        if ens.dims() != (n, n) {
                            return Err(Error::BadEnsemble("ensemble shape does not match n".into()));
                        }
                        let res = ens.reconstruction_residual(&state);
                        if res > tol.eq {
                            return Err(Error::BadEnsemble(format!("ensemble does not rebuild the state (residual {res:.3e})")));
                        }
                        Some(ens)
                    }
                };
                Ok(LoadedState::Bipartite { state, ensemble })
            }
            (None, Some(dims)) => Ok(LoadedState::Multipartite(MultipartiteState::new(dims.clone(), mat, tol)?)),
            _ => Err(Error::Invalid("state file needs exactly one of \"n\" and \"dims\"".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairJson {
    pub u: MatrixJson,
    pub v: MatrixJson,
}

impl PairJson {
    pub fn from_pair(p: &LocalUnitaryPair<f64>) -> Self {
        Self { u: MatrixJson::from_matrix(&p.u), v: MatrixJson::from_matrix(&p.v) }
    }

    pub fn to_pair(&self, tol: &Tolerances<f64>) -> Result<LocalUnitaryPair<f64>> {
        LocalUnitaryPair::new(self.u.to_matrix()?, self.v.to_matrix()?, tol)
    }
}

fn c2(z: &num_complex::Complex<f64>) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaJson {
    pub i_path: Vec<usize>,
    pub j_path: Vec<usize>,
    pub l_labels: Vec<usize>,
    pub m_labels: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantsFJson {
    pub class: &'static str,
    pub n: usize,
    pub rank: usize,
    pub spectrum: Vec<f64>,
    pub b_abs: Vec<Vec<Vec<f64>>>,
    pub c_vec: Vec<f64>,
    pub d_vecs: Vec<Vec<[f64; 2]>>,
    pub sigma: Vec<SigmaJson>,
    pub i_values: Vec<[f64; 2]>,
    pub sigma_rule: &'static str,
    pub phase_gauge: &'static str,
    pub floating_labels: Vec<usize>,
    pub warnings: Vec<String>,
}

impl From<&InvariantSetF<f64>> for InvariantsFJson {
    fn from(s: &InvariantSetF<f64>) -> Self {
        Self {
            class: "F",
            n: s.n,
            rank: s.rank(),
            spectrum: s.spectrum.clone(),
            b_abs: s.b_abs.iter().map(|b| (0..b.nrows()).map(|i| (0..b.ncols()).map(|j| b[(i, j)]).collect()).collect()).collect(),
            c_vec: s.c_vec.clone(),
            d_vecs: s.d_vecs.iter().map(|d| d.iter().map(c2).collect()).collect(),
            sigma: s
                .sigma
                .iter()
                .map(|x| SigmaJson {
                    i_path: x.i_path.clone(),
                    j_path: x.j_path.clone(),
                    l_labels: x.l_labels.clone(),
                    m_labels: x.m_labels.clone(),
                })
                .collect(),
            i_values: s.i_values.iter().map(c2).collect(),
            sigma_rule: s.rule.name(),
            phase_gauge: match s.gauge {
                PhaseGauge::Supplied => "supplied",
                PhaseGauge::Anchored => "anchored",
            },
            floating_labels: s.floating.clone(),
            warnings: s.warnings.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantsGJson {
    pub class: &'static str,
    pub n: usize,
    pub tr_rho2: f64,
    pub tr_a02: f64,
    pub tr_a12: f64,
    pub p: f64,
    pub q: f64,
    pub a0_levels: (f64, f64, usize),
    pub a1_levels: (f64, f64, usize),
    pub vk: Vec<f64>,
    pub ek_plus: Vec<f64>,
    pub ek_minus: Vec<f64>,
    pub warnings: Vec<String>,
}

impl From<&InvariantSetG<f64>> for InvariantsGJson {
    fn from(s: &InvariantSetG<f64>) -> Self {
        Self {
            class: "G",
            n: s.n,
            tr_rho2: s.tr_rho2,
            tr_a02: s.tr_a02,
            tr_a12: s.tr_a12,
            p: s.p,
            q: s.q,
            a0_levels: s.a0_levels,
            a1_levels: s.a1_levels,
            vk: s.vk.clone(),
            ek_plus: s.ek_plus.clone(),
            ek_minus: s.ek_minus.clone(),
            warnings: s.warnings.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstDiffJson {
    pub stage: &'static str,
    pub location: String,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictJson {
    pub verdict: &'static str,
    pub class: Option<&'static str>,
    pub conditional: bool,
    pub first_diff: Option<FirstDiffJson>,
    pub out_of_class: Option<String>,
    pub residual: Option<f64>,
    pub warnings: Vec<String>,
}

impl From<&EquivalenceVerdict<f64>> for VerdictJson {
    fn from(v: &EquivalenceVerdict<f64>) -> Self {
        Self {
            verdict: v.verdict.name(),
            class: v.class.map(|c| match c {
                crate::verdict::ClassTag::F => "F",
                crate::verdict::ClassTag::G => "G",
            }),
            conditional: v.conditional,
            first_diff: v.first_diff.as_ref().map(|d| FirstDiffJson {
                stage: d.stage.name(),
                location: d.location.clone(),
                magnitude: d.magnitude,
            }),
            out_of_class: v.out_of_class.clone(),
            residual: v.residual,
            warnings: v.warnings.clone(),
        }
    }
}

pub fn to_json<S: Serialize>(value: &S) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

pub fn read_json<D: for<'de> Deserialize<'de>>(text: &str) -> Result<D> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(format!("malformed JSON: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{werner_ensemble, werner_state};

    #[test]
    fn state_round_trip() {
        let tol = Tolerances::default();
        let w = werner_state(0.5);
        let e = werner_ensemble(0.5);
        let text = to_json(&StateFile::bipartite(&w, Some(&e)));
        let back: StateFile = read_json(&text).unwrap();
        match back.load(&tol).unwrap() {
            LoadedState::Bipartite { state, ensemble } => {
                assert!(crate::linalg::frobenius(&(state.matrix() - w.matrix())) < 1e-15);
                assert!(ensemble.unwrap().is_supplied());
            }
            _ => panic!("expected bipartite"),
        }
    }

    #[test]
    fn rejects_shape_errors() {
        let tol = Tolerances::default();
        let bad = r#"{"n":2,"rows":2,"cols":2,"re":[[1,0],[0,0]],"im":[[0,0],[0,0]]}"#;
        let f: StateFile = read_json(bad).unwrap();
        assert!(matches!(f.load(&tol), Err(Error::BadDimension(_))));
        let ragged = r#"{"n":2,"rows":4,"cols":4,"re":[[1]],"im":[[0]]}"#;
        let f: StateFile = read_json(ragged).unwrap();
        assert!(f.load(&tol).is_err());
        assert!(read_json::<StateFile>("{").is_err());
    }
}
