//! Enumeration of the path-ratio domain and its values.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frame::BStack;
use crate::scalar::{cplx, modulus, Real};

/// Which index pairs enter the path-ratio family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SigmaRule {
    /// Paths sharing both endpoints. These ratios are invariant under the
    /// frame gauge and are what equivalence decisions use.
    #[default]
    EndpointMatched,
    /// Every pair of distinct-index paths with nonzero products, endpoints
    /// unconstrained. Frame dependent; kept to tabulate ratios for a fixed
    /// frame choice such as the Werner listing.
    PairListing,
}

impl SigmaRule {
    pub fn name(&self) -> &'static str {
        match self {
            SigmaRule::EndpointMatched => "matched",
            SigmaRule::PairListing => "listing",
        }
    }
}

impl std::str::FromStr for SigmaRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matched" | "endpoint" | "endpoint-matched" => Ok(SigmaRule::EndpointMatched),
            "listing" | "pairs" | "pair-listing" => Ok(SigmaRule::PairListing),
            _ => Err(Error::Invalid(format!("unknown sigma rule '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SigmaOptions {
    pub rule: SigmaRule,
    /// Permit enumeration beyond n = 4 or N = 4.
    pub allow_large: bool,
}

/// Largest `n` and `N` enumerated without `allow_large`.
pub const DEFAULT_LIMIT: usize = 4;

/// One element of the domain. All indices and labels are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SigmaIndex {
    pub i_path: Vec<usize>,
    pub j_path: Vec<usize>,
    pub l_labels: Vec<usize>,
    pub m_labels: Vec<usize>,
}

impl SigmaIndex {
    pub fn k(&self) -> usize {
        self.l_labels.len()
    }

    pub fn r(&self) -> usize {
        self.m_labels.len()
    }
}

impl std::fmt::Display for SigmaIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?},{:?},{:?},{:?})", self.i_path, self.j_path, self.l_labels, self.m_labels)
    }
}

/// Distinct-index paths of `len` nodes over `0..n` in lexicographic order.
/// With `skip_interior = Some(v)`, paths through `v` other than at an
/// endpoint are dropped.
pub fn distinct_paths(n: usize, len: usize, skip_interior: Option<usize>) -> Vec<Vec<usize>> {
    fn rec(n: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in 0..n {
            if !cur.contains(&x) {
                cur.push(x);
                rec(n, len, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if len <= n {
        rec(n, len, &mut Vec::with_capacity(len), &mut out);
    }
    if let Some(v) = skip_interior {
        out.retain(|p| !p[1..p.len() - 1].contains(&v));
    }
    out
}

/// Label tuple number `idx` in lexicographic order over `0..labels`.
fn label_tuple(mut idx: usize, k: usize, labels: usize) -> Vec<usize> {
    let mut t = vec![0; k];
    for slot in t.iter_mut().rev() {
        *slot = idx % labels;
        idx /= labels;
    }
    t
}

struct Level<T: Real> {
    paths: Vec<Vec<usize>>,
    tuples: Vec<Vec<usize>>,
    /// `products[p][t]`: path `p` walked with label tuple `t`.
    products: Vec<Vec<Complex<T>>>,
}

fn level<T: Real>(stack: &BStack<T>, k: usize, skip: Option<usize>) -> Level<T> {
    let n = stack.n();
    let labels = stack.labels();
    let paths = distinct_paths(n, k + 1, skip);
    let count = labels.pow(k as u32);
    let tuples: Vec<Vec<usize>> = (0..count).map(|t| label_tuple(t, k, labels)).collect();
    let products = paths
        .iter()
        .map(|p| {
            tuples
                .iter()
                .map(|t| {
                    t.iter().enumerate().fold(cplx(T::one(), T::zero()), |acc, (s, &l)| {
                        acc * stack.mats[l][(p[s], p[s + 1])]
                    })
                })
                .collect()
        })
        .collect();
    Level { paths, tuples, products }
}

/// Errors unless the stack is within the default enumeration limits or
/// `allow_large` is set.
pub fn check_size<T: Real>(stack: &BStack<T>, opts: &SigmaOptions) -> Result<()> {
    let (n, labels) = (stack.n(), stack.labels());
    if !opts.allow_large && (n > DEFAULT_LIMIT || labels > DEFAULT_LIMIT) {
        return Err(Error::DomainTooLarge(estimate_items(n, labels)));
    }
    Ok(())
}

/// Number of (path, label tuple) pairs, an upper bound on one side of the domain.
pub fn estimate_items(n: usize, labels: usize) -> usize {
    (1..n)
        .map(|k| {
            let paths: usize = (0..=k).map(|s| n - s).product();
            paths.saturating_mul(labels.saturating_pow(k as u32))
        })
        .fold(0usize, |a, b| a.saturating_add(b))
}

/// Domain and values of the path ratios for `stack`, in canonical order
/// `(k, r, i_path, j_path, l_labels, m_labels)`.
///
/// `interior_free`: when the last singular value vanishes, its row and
/// column phases are independent, so paths through it are excluded.
pub fn enumerate<T: Real>(
    stack: &BStack<T>,
    rule: SigmaRule,
    interior_free: bool,
    zero: T,
) -> (Vec<SigmaIndex>, Vec<Complex<T>>) {
    let n = stack.n();
    if stack.labels() == 0 || n < 2 {
        return (Vec::new(), Vec::new());
    }
    let skip = interior_free.then_some(n - 1);
    let levels: Vec<Level<T>> = (1..n).map(|k| level(stack, k, skip)).collect();

    let mut blocks = Vec::new();
    for k in 0..levels.len() {
        for r in 0..levels.len() {
            for ip in 0..levels[k].paths.len() {
                blocks.push((k, r, ip));
            }
        }
    }
    let parts: Vec<Vec<(SigmaIndex, Complex<T>)>> = blocks
        .par_iter()
        .map(|&(k, r, ip)| {
            let (lk, lr) = (&levels[k], &levels[r]);
            let ipath = &lk.paths[ip];
            let mut out = Vec::new();
            for (jp, jpath) in lr.paths.iter().enumerate() {
                if rule == SigmaRule::EndpointMatched
                    && (ipath[0] != jpath[0] || ipath.last() != jpath.last())
                {
                    continue;
                }
                for (lt, num) in lk.products[ip].iter().enumerate() {
                    if rule == SigmaRule::PairListing && modulus(*num) <= zero {
                        continue;
                    }
                    for (mt, den) in lr.products[jp].iter().enumerate() {
                        if modulus(*den) <= zero {
                            continue;
                        }
                        if k == r && ip == jp && lt == mt {
                            continue;
                        }
                        let idx = SigmaIndex {
                            i_path: ipath.iter().map(|x| x + 1).collect(),
                            j_path: jpath.iter().map(|x| x + 1).collect(),
                            l_labels: lk.tuples[lt].iter().map(|x| x + 1).collect(),
                            m_labels: lr.tuples[mt].iter().map(|x| x + 1).collect(),
                        };
                        out.push((idx, *num / *den));
                    }
                }
            }
            out
        })
        .collect();
    parts.into_iter().flatten().unzip()
}

/// `I` for a single index, straight from the stack.
pub fn path_ratio<T: Real>(stack: &BStack<T>, idx: &SigmaIndex) -> Complex<T> {
    let walk = |path: &[usize], labels: &[usize]| {
        labels.iter().enumerate().fold(cplx(T::one(), T::zero()), |acc, (s, &l)| {
            acc * stack.entry(l, path[s] - 1, path[s + 1] - 1)
        })
    };
    walk(&idx.i_path, &idx.l_labels) / walk(&idx.j_path, &idx.m_labels)
}
