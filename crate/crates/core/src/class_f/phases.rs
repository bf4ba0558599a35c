//! Frame phases relating two B-stacks.
//!
//! Unknowns are unit scalars `u_1..u_n` (row phases), `v_n` (phase of the
//! last column, free when `λ_n = 0`) and, for floating labels, `θ_l`.
//! Every nonzero entry gives a constraint `c = θ_l (u_i / w_j) b` with
//! `w_j = u_j` for `j < n` and `w_n = v_n`; the diagonal of `B_0` adds
//! `u_n = v_n` when `λ_n > 0`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::frame::BStack;
use crate::scalar::{arg, cis, conj, cplx, creal, lit, modulus, to_f64, unit_phase, Real};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseAssignment<T: Real> {
    pub u: Vec<Complex<T>>,
    pub v_n: Complex<T>,
    /// `θ_l` for `l = 1..N`; one for labels whose phase is already fixed.
    pub label_phases: Vec<Complex<T>>,
}

impl<T: Real> PhaseAssignment<T> {
    /// Column phases `(u_1..u_{n-1}, v_n)`.
    pub fn w(&self) -> Vec<Complex<T>> {
        let mut w = self.u.clone();
        if let Some(last) = w.last_mut() {
            *last = self.v_n;
        }
        w
    }

    pub fn unimodularity_residual(&self) -> T {
        self.u
            .iter()
            .chain(std::iter::once(&self.v_n))
            .chain(&self.label_phases)
            .fold(T::zero(), |a, z| a.max((modulus(*z) - T::one()).abs()))
    }
}

/// One constraint. `label` is 0 for `B_0`; nodes are `0..n` for rows and
/// `n` for the last column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraint<T: Real> {
    pub label: usize,
    pub i: usize,
    pub j: usize,
    pub row_node: usize,
    pub col_node: usize,
    pub b: Complex<T>,
    pub c: Complex<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProblem<T: Real> {
    pub n: usize,
    pub labels: usize,
    pub floating: Vec<usize>,
    pub constraints: Vec<Constraint<T>>,
}

impl<T: Real> PhaseProblem<T> {
    fn col_node(&self, j: usize) -> usize {
        if j + 1 == self.n { self.n } else { j }
    }

    /// Constraints from entries nonzero in either stack, plus the `B_0`
    /// diagonal of `b`.
    pub fn new(b: &BStack<T>, c: &BStack<T>, floating: &[usize], tol: &Tolerances<T>) -> Result<Self> {
        if b.n() != c.n() || b.labels() != c.labels() {
            return Err(Error::DimensionMismatch(b.n(), c.n()));
        }
        let n = b.n();
        let mut p = PhaseProblem { n, labels: b.labels(), floating: floating.to_vec(), constraints: Vec::new() };
        for (i, &lam) in b.b0.iter().enumerate() {
            if lam > tol.zero {
                let z = creal(lam);
                let col_node = p.col_node(i);
                p.constraints.push(Constraint { label: 0, i, j: i, row_node: i, col_node, b: z, c: creal(c.b0[i]) });
            }
        }
        for l in 1..=b.labels() {
            for i in 0..n {
                for j in 0..n {
                    let (x, y) = (b.entry(l, i, j), c.entry(l, i, j));
                    if modulus(x) > tol.zero || modulus(y) > tol.zero {
                        let col_node = p.col_node(j);
                        p.constraints.push(Constraint { label: l, i, j, row_node: i, col_node, b: x, c: y });
                    }
                }
            }
        }
        Ok(p)
    }

    fn usable(&self, k: &Constraint<T>, zero: T) -> bool {
        modulus(k.b) > zero && modulus(k.c) > zero
    }

    /// Largest `|c − θ (u_i / w_j) b|` over all constraints.
    pub fn max_residual(&self, a: &PhaseAssignment<T>) -> T {
        let mut x = a.u.clone();
        x.push(a.v_n);
        self.constraints.iter().fold(T::zero(), |acc, k| {
            let theta = if k.label == 0 { creal(T::one()) } else { a.label_phases[k.label - 1] };
            let pred = theta * x[k.row_node] * conj(x[k.col_node]) * k.b;
            acc.max(modulus(k.c - pred))
        })
    }

    fn finish(&self, nodes: Vec<Complex<T>>, label_phases: Vec<Complex<T>>, tol: &Tolerances<T>) -> Result<PhaseAssignment<T>> {
        let a = PhaseAssignment { u: nodes[..self.n].to_vec(), v_n: nodes[self.n], label_phases };
        let res = self.max_residual(&a);
        if res > tol.eq {
            return Err(Error::InconsistentPhases(to_f64(res)));
        }
        Ok(a)
    }
}

/// Solves with the graph method when every label phase is fixed, with the
/// torus method otherwise.
pub fn solve_phases<T: Real>(problem: &PhaseProblem<T>, tol: &Tolerances<T>) -> Result<PhaseAssignment<T>> {
    if problem.floating.is_empty() {
        solve_graph(problem, tol)
    } else {
        solve_torus(problem, tol)
    }
}

/// Spanning-tree propagation: one representative per connected component
/// is set to 1 and the rest follow along constraints, strongest entry first.
pub fn solve_graph<T: Real>(problem: &PhaseProblem<T>, tol: &Tolerances<T>) -> Result<PhaseAssignment<T>> {
    if !problem.floating.is_empty() {
        return Err(Error::Invalid("graph solver needs fixed label phases".into()));
    }
    let one = creal(T::one());
    let mut x: Vec<Option<Complex<T>>> = vec![None; problem.n + 1];
    let edges: Vec<&Constraint<T>> =
        problem.constraints.iter().filter(|k| problem.usable(k, tol.zero) && k.row_node != k.col_node).collect();
    while let Some(root) = x.iter().position(Option::is_none) {
        x[root] = Some(one);
        loop {
            let mut best: Option<&Constraint<T>> = None;
            for k in &edges {
                if x[k.row_node].is_some() == x[k.col_node].is_some() {
                    continue;
                }
                if best.is_none_or(|b| modulus(k.b) > modulus(b.b)) {
                    best = Some(k);
                }
            }
            let Some(k) = best else { break };
            let ratio = unit_phase(k.c * conj(k.b));
            match (x[k.row_node], x[k.col_node]) {
                (Some(xr), None) => x[k.col_node] = Some(xr * conj(ratio)),
                (None, Some(xc)) => x[k.row_node] = Some(xc * ratio),
                _ => unreachable!(),
            }
        }
    }
    let nodes = x.into_iter().map(|z| z.unwrap_or(one)).collect();
    problem.finish(nodes, vec![one; problem.labels], tol)
}

/// Solves the phase equations as a linear system over the torus using an
/// integer diagonalisation `P M Q = D`.
pub fn solve_torus<T: Real>(problem: &PhaseProblem<T>, tol: &Tolerances<T>) -> Result<PhaseAssignment<T>> {
    let nodes = problem.n + 1;
    let cols = nodes + problem.floating.len();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut phi: Vec<T> = Vec::new();
    for k in problem.constraints.iter().filter(|k| problem.usable(k, tol.zero)) {
        let mut r = vec![0i64; cols];
        r[k.row_node] += 1;
        r[k.col_node] -= 1;
        if let Some(f) = problem.floating.iter().position(|&f| f == k.label) {
            r[nodes + f] += 1;
        }
        rows.push(r);
        phi.push(arg(k.c * conj(k.b)));
    }
    let mut x = vec![T::zero(); cols];
    if !rows.is_empty() {
        let s = smith(&rows, cols);
        let two_pi = T::two_pi();
        let mut y = vec![T::zero(); cols];
        for (k, &d) in s.diag.iter().enumerate() {
            let mut t = T::zero();
            for (e, &pe) in s.p[k].iter().enumerate() {
                if pe != 0 {
                    t += lit::<T>(pe as f64) * phi[e];
                    t = wrap(t, two_pi);
                }
            }
            y[k] = t / lit(d as f64);
        }
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = (0..cols).fold(T::zero(), |a, k| a + lit::<T>(s.q[i][k] as f64) * y[k]);
        }
    }
    let node_phases = x[..nodes].iter().map(|&a| cis(a)).collect();
    let mut label_phases = vec![cplx(T::one(), T::zero()); problem.labels];
    for (f, &l) in problem.floating.iter().enumerate() {
        label_phases[l - 1] = cis(x[nodes + f]);
    }
    problem.finish(node_phases, label_phases, tol)
}

fn wrap<T: Real>(t: T, two_pi: T) -> T {
    let r = t % two_pi;
    if r < T::zero() { r + two_pi } else { r }
}

/// `P M Q = diag(d_0, .., d_{r-1}, 0, ..)` with unimodular `P`, `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerDiagonal {
    pub p: Vec<Vec<i64>>,
    pub q: Vec<Vec<i64>>,
    pub diag: Vec<i64>,
}

pub fn smith(m: &[Vec<i64>], cols: usize) -> IntegerDiagonal {
    let rows = m.len();
    let mut a: Vec<Vec<i64>> = m.to_vec();
    let mut p: Vec<Vec<i64>> = (0..rows).map(|i| (0..rows).map(|j| i64::from(i == j)).collect()).collect();
    let mut q: Vec<Vec<i64>> = (0..cols).map(|i| (0..cols).map(|j| i64::from(i == j)).collect()).collect();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let mut pivot = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && pivot.is_none_or(|(pi, pj): (usize, usize)| a[i][j].abs() < a[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        p.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut q, t, pj);
        loop {
            for i in t + 1..rows {
                let f = a[i][t] / a[t][t];
                if f != 0 {
                    for j in 0..cols {
                        a[i][j] -= f * a[t][j];
                    }
                    for j in 0..rows {
                        p[i][j] -= f * p[t][j];
                    }
                }
            }
            for j in t + 1..cols {
                let f = a[t][j] / a[t][t];
                if f != 0 {
                    for i in 0..rows {
                        a[i][j] -= f * a[i][t];
                    }
                    for i in 0..cols {
                        q[i][j] -= f * q[i][t];
                    }
                }
            }
            let mut next: Option<(usize, usize)> = None;
            for i in t + 1..rows {
                if a[i][t] != 0 && next.is_none_or(|(x, y)| a[i][t].abs() < a[x][y].abs()) {
                    next = Some((i, t));
                }
            }
            for j in t + 1..cols {
                if a[t][j] != 0 && next.is_none_or(|(x, y)| a[t][j].abs() < a[x][y].abs()) {
                    next = Some((t, j));
                }
            }
            match next {
                None => break,
                Some((i, j)) if j == t => {
                    a.swap(t, i);
                    p.swap(t, i);
                }
                Some((_, j)) => {
                    swap_cols(&mut a, t, j);
                    swap_cols(&mut q, t, j);
                }
            }
        }
        diag.push(a[t][t]);
    }
    IntegerDiagonal { p, q, diag }
}

fn swap_cols(m: &mut [Vec<i64>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}
