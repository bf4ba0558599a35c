//! Seeded random instances: Haar unitaries, states in each class, and
//! projector pairs with prescribed canonical structure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::frame::{is_multiplicity_free, perturb_to_multiplicity_free, svd_frame};
use crate::scalar::{cis, cplx, creal, lit, modulus, ComplexMatrix, Real};
use crate::state::{coeff_to_vec, DensityMatrix, EigenEnsemble};
use crate::tolerance::Tolerances;

pub type Rng64 = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic per-case seed derived from a suite seed and a case index.
pub fn case_seed(seed: u64, case: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = seed ^ case.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0x632B_E59B_D9B4_E019);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<T: Real>(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        cplx(lit(re * h), lit(im * h))
    })
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// phases of `diag(R)` moved into `Q`.
pub fn haar_unitary<T: Real>(n: usize, rng: &mut impl Rng) -> ComplexMatrix<T> {
    let z = ginibre::<T>(n, n, rng);
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let m = modulus(d);
        let ph = if m > T::zero() { cplx(d.re / m, d.im / m) } else { creal(T::one()) };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Orthonormal eigenvectors from the columns of a Haar unitary on `n²`
/// dimensions, with the given weights.
pub fn random_ensemble<T: Real>(n: usize, mus: &[f64], rng: &mut impl Rng) -> EigenEnsemble<T> {
    let u = haar_unitary::<T>(n * n, rng);
    let mats = (0..mus.len())
        .map(|l| ComplexMatrix::from_fn(n, n, |i, j| u[(i * n + j, l)]))
        .collect();
    EigenEnsemble::from_raw(n, n, mus.iter().map(|&m| lit(m)).collect(), mats, lit(1e-6), false)
}

/// Descending weights summing to one with consecutive gaps of at least `gap`.
pub fn random_spectrum(rank: usize, gap: f64, rng: &mut impl Rng) -> Vec<f64> {
    let mut raw: Vec<f64> = (0..rank).map(|_| rng.random::<f64>() + 0.05).collect();
    raw.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // push apart from the bottom so every gap is at least 2 * gap before normalising
    for k in (0..rank.saturating_sub(1)).rev() {
        if raw[k] - raw[k + 1] < 2.0 * gap * rank as f64 {
            raw[k] = raw[k + 1] + 2.0 * gap * rank as f64;
        }
    }
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

/// Which class a generated state should belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateClass {
    F,
    G,
    Any,
}

/// Parameters for [`generate`].
#[derive(Debug, Clone, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    pub rank: usize,
    pub seed: u64,
    pub class: StateClass,
    /// Minimum gap between consecutive weights.
    pub gap: f64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        Self { n: 3, rank: 2, seed: 0, class: StateClass::Any, gap: 1e-5 }
    }
}

impl std::str::FromStr for RandomSpec {
    type Err = Error;

    /// Parses `key=value` pairs separated by commas, e.g. `n=3,rank=2,seed=7,class=F`.
    fn from_str(s: &str) -> Result<Self> {
        let mut spec = RandomSpec::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("expected key=value, got `{part}`")))?;
            let bad = |_| Error::Invalid(format!("bad value for {k}: `{v}`"));
            match k.trim() {
                "n" => spec.n = v.trim().parse().map_err(bad)?,
                "rank" => spec.rank = v.trim().parse().map_err(bad)?,
                "seed" => spec.seed = v.trim().parse().map_err(bad)?,
                "gap" => spec.gap = v.trim().parse().map_err(|_| Error::Invalid(format!("bad gap `{v}`")))?,
                "class" => {
                    spec.class = match v.trim().to_ascii_lowercase().as_str() {
                        "f" => StateClass::F,
                        "g" => StateClass::G,
                        "any" => StateClass::Any,
                        other => return Err(Error::Invalid(format!("unknown class `{other}`"))),
                    }
                }
                other => return Err(Error::Invalid(format!("unknown key `{other}`"))),
            }
        }
        Ok(spec)
    }
}

/// Generates a state (with the ensemble it was built from) per `spec`.
pub fn generate<T: Real>(spec: &RandomSpec) -> Result<(DensityMatrix<T>, EigenEnsemble<T>)> {
    if spec.n < 2 {
        return Err(Error::Invalid("n must be at least 2".into()));
    }
    let mut rng = seeded(spec.seed);
    let tol = Tolerances::<T>::default();
    match spec.class {
        StateClass::G => {
            if spec.rank != 2 {
                return Err(Error::Invalid("class G states have rank 2".into()));
            }
            let ens = random_class_g::<T>(spec.n, spec.gap, &mut rng);
            Ok((ens.to_density(), ens))
        }
        StateClass::F | StateClass::Any => {
            if spec.rank == 0 || spec.rank > spec.n * spec.n {
                return Err(Error::Invalid(format!("rank must be in 1..={}", spec.n * spec.n)));
            }
            let mus = random_spectrum(spec.rank, spec.gap, &mut rng);
            let mut ens = random_ensemble::<T>(spec.n, &mus, &mut rng);
            if spec.class == StateClass::F {
                let frame = svd_frame(&ens.coeff_mats()[0], &tol)?;
                if !is_multiplicity_free(&frame, tol.sv_gap) {
                    ens = perturb_to_multiplicity_free(&ens, tol.sv_gap * lit(100.0), &tol)?;
                }
            }
            Ok((ens.to_density(), ens))
        }
    }
}

/// Rank-two state whose coefficient matrices are `P/√r` and `Q/√s` for
/// orthogonal random projectors `P`, `Q` (ranks `r, s ≥ 1`, `r + s ≤ n`).
pub fn random_class_g<T: Real>(n: usize, gap: f64, rng: &mut impl Rng) -> EigenEnsemble<T> {
    let r = rng.random_range(1..n);
    let s = rng.random_range(1..=(n - r));
    let u = haar_unitary::<T>(n, rng);
    let p = projector_from_columns(&u, 0..r);
    let q = projector_from_columns(&u, r..r + s);
    let a0 = p.map(|z| z / creal(lit::<T>(r as f64).sqrt()));
    let a1 = q.map(|z| z / creal(lit::<T>(s as f64).sqrt()));
    let mus = random_spectrum(2, gap, rng);
    EigenEnsemble::from_raw(n, n, mus.iter().map(|&m| lit(m)).collect(), vec![a0, a1], lit(1e-6), false)
}

pub fn projector_from_columns<T: Real>(u: &ComplexMatrix<T>, cols: std::ops::Range<usize>) -> ComplexMatrix<T> {
    let x = ComplexMatrix::from_fn(u.nrows(), cols.len(), |i, j| u[(i, cols.start + j)]);
    &x * x.adjoint()
}

/// One block of the canonical form of a projector pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairBlock {
    /// 1-dimensional, `P = Q = 1`.
    BothOne,
    /// 1-dimensional, `P = Q = 0`.
    BothZero,
    /// 1-dimensional, `P = 1, Q = 0`.
    POnly,
    /// 1-dimensional, `P = 0, Q = 1`.
    QOnly,
    /// 2-dimensional generic block at principal angle `θ ∈ (0, π/2)`:
    /// `V = (2P−1)(2Q−1)` has eigenvalues `e^{±2iθ}` there.
    Angle(f64),
}

impl PairBlock {
    pub fn dim(&self) -> usize {
        match self {
            PairBlock::Angle(_) => 2,
            _ => 1,
        }
    }
}

/// Projector pair with the given canonical blocks, rotated by `u`.
pub fn projector_pair<T: Real>(blocks: &[PairBlock], u: &ComplexMatrix<T>) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let n: usize = blocks.iter().map(PairBlock::dim).sum();
    let mut p = ComplexMatrix::<T>::zeros(n, n);
    let mut q = ComplexMatrix::<T>::zeros(n, n);
    let one = creal(T::one());
    let mut at = 0;
    for b in blocks {
        match *b {
            PairBlock::BothOne => {
                p[(at, at)] = one;
                q[(at, at)] = one;
            }
            PairBlock::BothZero => {}
            PairBlock::POnly => p[(at, at)] = one,
            PairBlock::QOnly => q[(at, at)] = one,
            PairBlock::Angle(theta) => {
                let (c, s) = (theta.cos(), theta.sin());
                p[(at, at)] = one;
                q[(at, at)] = creal(lit(c * c));
                q[(at, at + 1)] = creal(lit(c * s));
                q[(at + 1, at)] = creal(lit(c * s));
                q[(at + 1, at + 1)] = creal(lit(s * s));
            }
        }
        at += b.dim();
    }
    (u * p * u.adjoint(), u * q * u.adjoint())
}

/// Random canonical block list of total dimension `n`.
pub fn random_blocks(n: usize, rng: &mut impl Rng) -> Vec<PairBlock> {
    let mut blocks = Vec::new();
    let mut left = n;
    while left > 0 {
        let pick = rng.random_range(0..6);
        if pick >= 4 && left >= 2 {
            // keep angles away from 0 and π/2 so the block is genuinely 2-dimensional
            blocks.push(PairBlock::Angle(0.15 + 1.25 * rng.random::<f64>()));
            left -= 2;
        } else {
            blocks.push(match pick % 4 {
                0 => PairBlock::BothOne,
                1 => PairBlock::BothZero,
                2 => PairBlock::POnly,
                _ => PairBlock::QOnly,
            });
            left -= 1;
        }
    }
    blocks
}

/// Random unit vector in `C^n`.
pub fn random_unit_vector<T: Real>(n: usize, rng: &mut impl Rng) -> ComplexMatrix<T> {
    let g = ginibre::<T>(n, 1, rng);
    let nrm = crate::linalg::frobenius(&g);
    g.map(|z| z / creal(nrm))
}

/// Random phase `e^{iφ}`.
pub fn random_phase<T: Real>(rng: &mut impl Rng) -> num_complex::Complex<T> {
    cis(lit(rng.random::<f64>() * std::f64::consts::TAU))
}

/// Pure-state density matrix for a coefficient matrix (helper for fixtures).
pub fn density_of(a: &ComplexMatrix<f64>) -> ComplexMatrix<f64> {
    let v = coeff_to_vec(a);
    &v * v.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_residual;

    #[test]
    fn haar_is_unitary_and_reproducible() {
        for n in 1..6 {
            let u = haar_unitary::<f64>(n, &mut seeded(n as u64));
            assert!(unitarity_residual(&u) < 1e-12);
            let again = haar_unitary::<f64>(n, &mut seeded(n as u64));
            assert_eq!(u, again);
        }
        let scalar = haar_unitary::<f64>(1, &mut seeded(3));
        assert!((modulus(scalar[(0, 0)]) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn haar_column_norms_spread_uniformly() {
        // |U_00|² is Beta(1, n-1) distributed; mean 1/n
        let n = 4;
        let mut rng = seeded(99);
        let trials = 4000;
        let mean: f64 = (0..trials)
            .map(|_| modulus(haar_unitary::<f64>(n, &mut rng)[(0, 0)]).powi(2))
            .sum::<f64>()
            / trials as f64;
        assert!((mean - 0.25).abs() < 0.02, "{mean}");
    }

    #[test]
    fn spectrum_gaps() {
        let mut rng = seeded(1);
        for rank in 1..6 {
            let s = random_spectrum(rank, 1e-5, &mut rng);
            assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(s.windows(2).all(|w| w[0] - w[1] >= 1e-5));
        }
    }

    #[test]
    fn spec_parsing() {
        let s: RandomSpec = "n=4, rank=3, seed=7, class=F".parse().unwrap();
        assert_eq!((s.n, s.rank, s.seed, s.class), (4, 3, 7, StateClass::F));
        assert!("n=4,bogus=1".parse::<RandomSpec>().is_err());
        assert!("seed=x".parse::<RandomSpec>().is_err());
    }

    #[test]
    fn generated_class_f_is_multiplicity_free() {
        let tol = Tolerances::<f64>::default();
        for seed in 0..20 {
            let spec = RandomSpec { seed, class: StateClass::F, ..Default::default() };
            let (_, ens) = generate::<f64>(&spec).unwrap();
            let frame = svd_frame(&ens.coeff_mats()[0], &tol).unwrap();
            assert!(is_multiplicity_free(&frame, tol.sv_gap));
        }
    }
}
