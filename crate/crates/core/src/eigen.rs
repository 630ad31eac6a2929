//! Eigen and linear solvers for implicit symmetric operators.
//!
//! [`extreme_eigs`] is a Lanczos-style Krylov iteration with full
//! reorthogonalization, optional deflation, and true-residual convergence
//! checks. [`dense_sym_eig`] handles small dense symmetric matrices.
//! [`cg_solve`] is a projected conjugate-gradient solver and
//! [`smallest_generalized`] solves `A x = lambda B x` on a deflated subspace
//! by a Lanczos iteration in the B-inner product, with `B`-solves done by CG.
//!
//! All solvers are deterministic given the configured seed and single
//! threaded; distinct solver instances can run concurrently.

use crate::graph::SpectralOperator;
use nalgebra::DMatrix;
use ndarray::{Array1, Array2};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Requested end of the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Largest,
    Smallest,
}

/// Solver configuration.
#[derive(Debug, Clone)]
pub struct EigenConfig {
    /// Residual tolerance `||Op v - lambda v||` (measured against the
    /// deflated operator when a deflation basis is present).
    pub tol: f64,
    /// Maximum number of Krylov steps.
    pub max_iter: usize,
    /// Seed for the random start vector.
    pub seed: u64,
    /// Orthonormal-izable set the iteration stays orthogonal to.
    pub deflation_basis: Vec<Array1<f64>>,
}

impl Default for EigenConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 5000,
            seed: 7,
            deflation_basis: Vec::new(),
        }
    }
}

impl EigenConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn deflated(mut self, basis: Vec<Array1<f64>>) -> Self {
        self.deflation_basis = basis;
        self
    }
}

/// Paired eigenvalues/eigenvectors with convergence metadata.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Sorted per request direction (ascending for `Smallest` and for the
    /// dense solver, descending for `Largest`).
    pub eigenvalues: Vec<f64>,
    /// Unit eigenvectors, pairwise orthonormal, signs fixed so the first
    /// nonzero coordinate is positive.
    pub eigenvectors: Vec<Array1<f64>>,
    /// Per-pair `||Op v - lambda v||`.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl SpectrumResult {
    fn empty() -> Self {
        Self {
            eigenvalues: Vec::new(),
            eigenvectors: Vec::new(),
            residuals: Vec::new(),
            iterations: 0,
            converged: true,
        }
    }
}

#[derive(Debug, Error)]
pub enum EigenError {
    #[error("eigensolver did not converge after {iterations} iterations (worst residual {worst_residual:.3e})")]
    NotConverged {
        iterations: usize,
        worst_residual: f64,
        best: Box<SpectrumResult>,
    },
    #[error("linear solver did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    SolveNotConverged { iterations: usize, residual: f64 },
    #[error("operator is not positive semidefinite on the working subspace")]
    NotPositiveSemidefinite,
    #[error("matrix is not symmetric (asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("dense eigensolver dimension {dim} exceeds cap {cap}")]
    DimCapExceeded { dim: usize, cap: usize },
    #[error("invalid solver input: {0}")]
    InvalidInput(String),
}

/// Dense matrix wrapped as a [`SpectralOperator`]; mostly for tests and
/// oracles.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    a: Array2<f64>,
}

impl DenseOperator {
    pub fn new(a: Array2<f64>) -> Result<Self, EigenError> {
        if a.nrows() != a.ncols() {
            return Err(EigenError::InvalidInput(format!(
                "operator must be square, got {} x {}",
                a.nrows(),
                a.ncols()
            )));
        }
        Ok(Self { a })
    }

    pub fn from_diag(d: &[f64]) -> Self {
        let mut a = Array2::zeros((d.len(), d.len()));
        for (i, &v) in d.iter().enumerate() {
            a[[i, i]] = v;
        }
        Self { a }
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.a
    }
}

impl SpectralOperator for DenseOperator {
    fn dim(&self) -> usize {
        self.a.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, row) in self.a.rows().into_iter().enumerate() {
            y[i] = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

// ---------------------------------------------------------------------------
// small vector helpers
// ---------------------------------------------------------------------------

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Flips the vector so its first coordinate of magnitude above 1e-12 is
/// positive; reproducible output for tests.
pub(crate) fn fix_sign(v: &mut [f64]) {
    if let Some(x) = v.iter().find(|x| x.abs() > 1e-12) {
        if *x < 0.0 {
            for y in v.iter_mut() {
                *y = -*y;
            }
        }
    }
}

/// Modified Gram-Schmidt; drops numerically dependent vectors.
pub(crate) fn orthonormalize(vs: &[Array1<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vs {
        let mut w: Vec<f64> = v.to_vec();
        for _ in 0..2 {
            for u in &out {
                let d = dot(u, &w);
                axpy(-d, u, &mut w);
            }
        }
        let nw = norm(&w);
        if nw > 1e-10 {
            w.iter_mut().for_each(|x| *x /= nw);
            out.push(w);
        }
    }
    out
}

fn project_off(basis: &[Vec<f64>], w: &mut [f64]) {
    for u in basis {
        let d = dot(u, w);
        axpy(-d, u, w);
    }
}

fn random_direction(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// A fresh unit vector orthogonal to `fixed` and `others`, or `None` if the
/// remaining subspace is numerically empty.
fn fresh_direction(
    dim: usize,
    rng: &mut ChaCha8Rng,
    fixed: &[Vec<f64>],
    others: &[Vec<f64>],
) -> Option<Vec<f64>> {
    for _ in 0..32 {
        let mut w = random_direction(dim, rng);
        for _ in 0..2 {
            project_off(fixed, &mut w);
            project_off(others, &mut w);
        }
        let nw = norm(&w);
        if nw > 1e-8 * (dim as f64).sqrt() {
            w.iter_mut().for_each(|x| *x /= nw);
            return Some(w);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// tridiagonal kernels
// ---------------------------------------------------------------------------

/// Eigenvalues of a symmetric tridiagonal matrix by the implicit QL method
/// (values only, unsorted).
fn tridiag_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    if n == 0 {
        return Vec::new();
    }
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    if n > 1 {
        e[..n - 1].copy_from_slice(&off[..n - 1]);
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r } else { -r });
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d
}

/// Solves `(T - theta I) y = b` in place for tridiagonal `T`, Gaussian
/// elimination with partial pivoting (one fill-in superdiagonal).
fn solve_shifted_tridiag(diag: &[f64], off: &[f64], theta: f64, b: &mut [f64]) {
    let n = diag.len();
    let mut d: Vec<f64> = diag.iter().map(|&x| x - theta).collect();
    let mut du: Vec<f64> = if n > 1 { off[..n - 1].to_vec() } else { Vec::new() };
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut dl: Vec<f64> = du.clone();
    let scale = diag.iter().chain(off).fold(1.0f64, |a, &x| a.max(x.abs()));
    let tiny = f64::EPSILON * scale;
    for i in 0..n.saturating_sub(1) {
        if dl[i].abs() > d[i].abs() {
            // swap rows i and i+1; one fill-in entry appears at du2[i]
            let (a, bb) = (d[i], du[i]);
            d[i] = dl[i];
            dl[i] = a;
            du[i] = d[i + 1];
            d[i + 1] = bb;
            if i + 1 < n - 1 {
                du2[i] = du[i + 1];
                du[i + 1] = 0.0;
            }
            b.swap(i, i + 1);
        }
        let piv = if d[i].abs() < tiny { tiny.copysign(d[i]) } else { d[i] };
        d[i] = piv;
        let l = dl[i] / piv;
        d[i + 1] -= l * du[i];
        if i + 1 < n - 1 {
            du[i + 1] -= l * du2[i];
        }
        b[i + 1] -= l * b[i];
    }
    if d[n - 1].abs() < tiny {
        d[n - 1] = tiny.copysign(d[n - 1]);
    }
    // back substitution
    b[n - 1] /= d[n - 1];
    if n > 1 {
        let i = n - 2;
        b[i] = (b[i] - du[i] * b[i + 1]) / d[i];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
}

/// Eigenvector of tridiagonal `T` for an approximate eigenvalue `theta`,
/// by inverse iteration, kept orthogonal to `prior` (resolves clusters).
fn tridiag_eigenvector(diag: &[f64], off: &[f64], theta: f64, prior: &[Vec<f64>]) -> Vec<f64> {
    let n = diag.len();
    // deterministic quasi-random start
    let mut y: Vec<f64> = (0..n)
        .map(|i| (((i as f64) + 1.0) * 0.754_877_666).sin() + 0.25)
        .collect();
    let scale = diag.iter().chain(off).fold(1.0f64, |a, &x| a.max(x.abs()));
    let shift = theta + scale * 1e-14;
    for _ in 0..4 {
        project_off(prior, &mut y);
        let ny = norm(&y);
        if ny < 1e-300 {
            y = (0..n).map(|i| ((i as f64) * 1.618_033).cos()).collect();
            continue;
        }
        y.iter_mut().for_each(|x| *x /= ny);
        solve_shifted_tridiag(diag, off, shift, &mut y);
    }
    project_off(prior, &mut y);
    let ny = norm(&y);
    if ny > 0.0 {
        y.iter_mut().for_each(|x| *x /= ny);
    }
    y
}

// ---------------------------------------------------------------------------
// extreme_eigs
// ---------------------------------------------------------------------------

struct LanczosState<'a> {
    op: &'a dyn SpectralOperator,
    fixed: Vec<Vec<f64>>, // orthonormalized deflation basis
    v: Vec<Vec<f64>>,
    alphas: Vec<f64>,
    betas: Vec<f64>,
    matvecs: usize,
}

impl<'a> LanczosState<'a> {
    fn apply_deflated(&mut self, x: &[f64]) -> Vec<f64> {
        let mut w = self.op.matvec(x);
        self.matvecs += 1;
        project_off(&self.fixed, &mut w);
        w
    }

    fn apply_deflated_at(&mut self, j: usize) -> Vec<f64> {
        let mut w = self.op.matvec(&self.v[j]);
        self.matvecs += 1;
        project_off(&self.fixed, &mut w);
        w
    }

    /// Rayleigh-Ritz over the current basis; returns `(pairs, worst_residual)`
    /// with pairs sorted per request direction, or `None` when the basis is
    /// still too small.
    fn check(&mut self, count: usize, which: Which) -> Option<(Vec<RitzPair>, f64)> {
        let k = self.alphas.len();
        if k < count {
            return None;
        }
        let mut theta = tridiag_eigenvalues(&self.alphas, &self.betas[..k - 1]);
        theta.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let wanted: Vec<f64> = match which {
            Which::Smallest => theta.iter().take(count).copied().collect(),
            Which::Largest => theta.iter().rev().take(count).copied().collect(),
        };
        let mut pairs: Vec<RitzPair> = Vec::with_capacity(count);
        let mut prior_y: Vec<Vec<f64>> = Vec::with_capacity(count);
        let mut worst = 0.0f64;
        for &th in &wanted {
            let y = tridiag_eigenvector(&self.alphas, &self.betas[..k - 1], th, &prior_y);
            // lift to the full space
            let dim = self.op.dim();
            let mut u = vec![0.0; dim];
            for (vj, &yj) in self.v.iter().zip(&y) {
                axpy(yj, vj, &mut u);
            }
            project_off(&self.fixed, &mut u);
            // keep returned vectors orthonormal among themselves
            for p in &pairs {
                let d = dot(&p.vector, &u);
                axpy(-d, &p.vector, &mut u);
            }
            let nu = norm(&u);
            if nu < 1e-8 {
                // unresolved cluster; force further iteration
                worst = f64::MAX;
                prior_y.push(y);
                continue;
            }
            u.iter_mut().for_each(|x| *x /= nu);
            let z = self.apply_deflated(&u);
            let lambda = dot(&u, &z);
            let mut r = z;
            axpy(-lambda, &u, &mut r);
            let res = norm(&r);
            worst = worst.max(res);
            pairs.push(RitzPair { value: lambda, vector: u, residual: res });
            prior_y.push(y);
        }
        Some((pairs, worst))
    }
}

struct RitzPair {
    value: f64,
    vector: Vec<f64>,
    residual: f64,
}

fn assemble(mut pairs: Vec<RitzPair>, which: Which, iterations: usize, converged: bool) -> SpectrumResult {
    match which {
        Which::Smallest => pairs.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap()),
        Which::Largest => pairs.sort_by(|a, b| b.value.partial_cmp(&a.value).unwrap()),
    }
    let mut eigenvalues = Vec::with_capacity(pairs.len());
    let mut eigenvectors = Vec::with_capacity(pairs.len());
    let mut residuals = Vec::with_capacity(pairs.len());
    for mut p in pairs {
        eigenvalues.push(p.value);
        fix_sign(&mut p.vector);
        eigenvectors.push(Array1::from(p.vector));
        residuals.push(p.residual);
    }
    SpectrumResult {
        eigenvalues,
        eigenvectors,
        residuals,
        iterations,
        converged,
    }
}

/// Computes `count` extreme eigenpairs of a symmetric operator, each
/// orthogonal to the deflation basis, by a Lanczos iteration with full
/// reorthogonalization. Deterministic given `cfg.seed`.
///
/// When a deflation basis is present the returned pairs are eigenpairs of
/// the operator restricted to the orthogonal complement of that basis, and
/// residuals are measured there.
pub fn extreme_eigs(
    op: &dyn SpectralOperator,
    count: usize,
    which: Which,
    cfg: &EigenConfig,
) -> Result<SpectrumResult, EigenError> {
    let dim = op.dim();
    if cfg.tol <= 0.0 || cfg.tol.is_nan() || cfg.max_iter == 0 {
        return Err(EigenError::InvalidInput(format!(
            "tol must be > 0 and max_iter > 0, got tol = {}, max_iter = {}",
            cfg.tol, cfg.max_iter
        )));
    }
    if count == 0 {
        return Ok(SpectrumResult::empty());
    }
    if count > dim {
        return Err(EigenError::InvalidInput(format!(
            "requested {count} eigenpairs from a dimension-{dim} operator"
        )));
    }
    let fixed = orthonormalize(&cfg.deflation_basis);
    let eff_dim = dim - fixed.len();
    if count > eff_dim {
        return Err(EigenError::InvalidInput(format!(
            "requested {count} eigenpairs but only {eff_dim} dimensions remain after deflation"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let v0 = fresh_direction(dim, &mut rng, &fixed, &[])
        .ok_or_else(|| EigenError::InvalidInput("deflation basis spans the whole space".into()))?;

    let mut st = LanczosState {
        op,
        fixed,
        v: vec![v0],
        alphas: Vec::new(),
        betas: Vec::new(),
        matvecs: 0,
    };

    let check_interval = 8;
    let mut norm_est = 0.0f64;
    loop {
        let j = st.alphas.len();
        let w0 = st.apply_deflated_at(j);
        let alpha = dot(&st.v[j], &w0);
        st.alphas.push(alpha);
        let mut w = w0;
        // full reorthogonalization, two passes
        for _ in 0..2 {
            for u in &st.fixed {
                let d = dot(u, &w);
                axpy(-d, u, &mut w);
            }
            for vi in &st.v {
                let d = dot(vi, &w);
                axpy(-d, vi, &mut w);
            }
        }
        let beta = norm(&w);
        norm_est = norm_est.max(alpha.abs()).max(beta);

        let basis_full = st.v.len() >= eff_dim;
        let budget_out = st.alphas.len() >= cfg.max_iter;
        let final_round = basis_full || budget_out;

        if !final_round {
            if beta > 1e-13 * (norm_est + 1.0) {
                st.betas.push(beta);
                w.iter_mut().for_each(|x| *x /= beta);
                st.v.push(w);
            } else {
                // invariant subspace: restart in the unexplored remainder
                let fixed = std::mem::take(&mut st.fixed);
                let fresh = fresh_direction(dim, &mut rng, &fixed, &st.v);
                st.fixed = fixed;
                match fresh {
                    Some(f) => {
                        st.betas.push(0.0);
                        st.v.push(f);
                    }
                    None => {
                        let out = finalize(&mut st, count, which, cfg.tol, basis_full);
                        return out;
                    }
                }
            }
        }

        if final_round {
            return finalize(&mut st, count, which, cfg.tol, basis_full);
        }

        if st.alphas.len().is_multiple_of(check_interval) {
            if let Some((pairs, worst)) = st.check(count, which) {
                if worst <= cfg.tol {
                    return Ok(assemble(pairs, which, st.alphas.len(), true));
                }
            }
        }
    }
}

fn finalize(
    st: &mut LanczosState,
    count: usize,
    which: Which,
    tol: f64,
    exact_subspace: bool,
) -> Result<SpectrumResult, EigenError> {
    let iterations = st.alphas.len();
    match st.check(count, which) {
        Some((pairs, worst)) => {
            // With the basis spanning the whole deflated space the
            // decomposition is exact up to roundoff; accept a relaxed floor.
            let floor = if exact_subspace {
                tol.max(1e-9 * (1.0 + st.alphas.iter().fold(0.0f64, |a, &x| a.max(x.abs()))))
            } else {
                tol
            };
            if worst <= floor {
                Ok(assemble(pairs, which, iterations, true))
            } else {
                let best = assemble(pairs, which, iterations, false);
                Err(EigenError::NotConverged {
                    iterations,
                    worst_residual: worst,
                    best: Box::new(best),
                })
            }
        }
        None => Err(EigenError::NotConverged {
            iterations,
            worst_residual: f64::MAX,
            best: Box::new(SpectrumResult {
                converged: false,
                ..SpectrumResult::empty()
            }),
        }),
    }
}

// ---------------------------------------------------------------------------
// dense solver
// ---------------------------------------------------------------------------

/// Default dimension cap for [`dense_sym_eig`].
pub const DENSE_EIG_CAP: usize = 4096;

/// Full spectrum of a dense symmetric matrix, eigenvalues ascending.
pub fn dense_sym_eig(a: &Array2<f64>) -> Result<SpectrumResult, EigenError> {
    dense_sym_eig_capped(a, DENSE_EIG_CAP)
}

/// [`dense_sym_eig`] with an explicit dimension cap.
pub fn dense_sym_eig_capped(a: &Array2<f64>, cap: usize) -> Result<SpectrumResult, EigenError> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(EigenError::InvalidInput(format!(
            "matrix must be square, got {} x {}",
            n,
            a.ncols()
        )));
    }
    if n > cap {
        return Err(EigenError::DimCapExceeded { dim: n, cap });
    }
    if n == 0 {
        return Ok(SpectrumResult::empty());
    }
    let amax = a.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
    let defect = (0..n)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .map(|(i, j)| (a[[i, j]] - a[[j, i]]).abs())
        .fold(0.0f64, f64::max);
    if defect > 1e-9 * (amax + 1.0) {
        return Err(EigenError::NotSymmetric(defect));
    }

    let m = DMatrix::from_fn(n, n, |i, j| 0.5 * (a[[i, j]] + a[[j, i]]));
    let se = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());

    // one dense product gives every residual
    let av = &m * &se.eigenvectors;
    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for &idx in &order {
        let lam = se.eigenvalues[idx];
        let mut v: Vec<f64> = se.eigenvectors.column(idx).iter().copied().collect();
        let res = (0..n)
            .map(|i| {
                let d = av[(i, idx)] - lam * v[i];
                d * d
            })
            .sum::<f64>()
            .sqrt();
        fix_sign(&mut v);
        eigenvalues.push(lam);
        eigenvectors.push(Array1::from(v));
        residuals.push(res);
    }
    Ok(SpectrumResult {
        eigenvalues,
        eigenvectors,
        residuals,
        iterations: 0,
        converged: true,
    })
}

// ---------------------------------------------------------------------------
// conjugate gradient
// ---------------------------------------------------------------------------

/// Solves `Op x = b` for a symmetric operator that is positive semidefinite
/// on the orthogonal complement of `deflation_basis`. Both `b` and the
/// iterates are kept projected onto that complement, so a right-hand side
/// living in the deflated space yields `x = 0`.
pub fn cg_solve(
    op: &dyn SpectralOperator,
    b: &Array1<f64>,
    deflation_basis: &[Array1<f64>],
    tol: f64,
) -> Result<Array1<f64>, EigenError> {
    let dim = op.dim();
    if b.len() != dim {
        return Err(EigenError::InvalidInput(format!(
            "dimension mismatch: operator {dim}, rhs {}",
            b.len()
        )));
    }
    let fixed = orthonormalize(deflation_basis);
    let mut rhs: Vec<f64> = b.to_vec();
    let b0 = norm(&rhs);
    project_off(&fixed, &mut rhs);
    let bnorm = norm(&rhs);
    if bnorm <= 1e-13 * (1.0 + b0) {
        return Ok(Array1::zeros(dim));
    }

    let mut x = vec![0.0; dim];
    let mut r = rhs;
    let mut p = r.clone();
    let mut rs = dot(&r, &r);
    let max_iter = (6 * dim).max(200);
    for _ in 0..max_iter {
        if rs.sqrt() <= tol * bnorm {
            return Ok(Array1::from(x));
        }
        let mut ap = op.matvec(&p);
        project_off(&fixed, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            return Err(EigenError::NotPositiveSemidefinite);
        }
        let alpha = rs / pap;
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &ap, &mut r);
        project_off(&fixed, &mut r);
        let rs_new = dot(&r, &r);
        let beta = rs_new / rs;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
        rs = rs_new;
    }
    if rs.sqrt() <= tol * bnorm {
        Ok(Array1::from(x))
    } else {
        Err(EigenError::SolveNotConverged {
            iterations: max_iter,
            residual: rs.sqrt() / bnorm,
        })
    }
}

// ---------------------------------------------------------------------------
// generalized eigenproblem
// ---------------------------------------------------------------------------

/// Smallest generalized eigenpair of `A x = lambda B x` on the orthogonal
/// complement of `deflation_basis`, for symmetric `A` and symmetric positive
/// semidefinite `B` whose null space is contained in the deflated span.
///
/// Runs a Lanczos iteration in the B-inner product; every step applies
/// `B^{-1} A` through [`cg_solve`].
pub fn smallest_generalized(
    op_a: &dyn SpectralOperator,
    op_b: &dyn SpectralOperator,
    deflation_basis: &[Array1<f64>],
    cfg: &EigenConfig,
) -> Result<SpectrumResult, EigenError> {
    let dim = op_a.dim();
    if op_b.dim() != dim {
        return Err(EigenError::InvalidInput(format!(
            "operator dimensions differ: {} vs {}",
            dim,
            op_b.dim()
        )));
    }
    let fixed = orthonormalize(deflation_basis);
    let eff_dim = dim - fixed.len();
    if eff_dim == 0 {
        return Err(EigenError::InvalidInput(
            "deflation basis spans the whole space".into(),
        ));
    }
    let basis_arrays: Vec<Array1<f64>> =
        fixed.iter().map(|v| Array1::from(v.clone())).collect();
    let cg_tol = 1e-12;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    // B-normalized start
    let mut v0 = fresh_direction(dim, &mut rng, &fixed, &[])
        .ok_or_else(|| EigenError::InvalidInput("deflation basis spans the whole space".into()))?;
    let mut bv0 = op_b.matvec(&v0);
    let bn = dot(&v0, &bv0);
    if bn <= 0.0 {
        return Err(EigenError::NotPositiveSemidefinite);
    }
    let s = bn.sqrt();
    v0.iter_mut().for_each(|x| *x /= s);
    bv0.iter_mut().for_each(|x| *x /= s);

    let mut v: Vec<Vec<f64>> = vec![v0];
    let mut bv: Vec<Vec<f64>> = vec![bv0];
    // projected pencil matrix H[i][j] = v_i' A v_j (B-orthonormal basis)
    let mut h: Vec<Vec<f64>> = Vec::new();

    let max_steps = cfg.max_iter.min(eff_dim.max(1));
    let mut best: Option<RitzPair> = None;
    for step in 0.. {
        let j = h.len();
        let av = {
            let mut w = op_a.matvec(&v[j]);
            project_off(&fixed, &mut w);
            w
        };
        let mut col: Vec<f64> = v.iter().map(|vi| dot(vi, &av)).collect();
        col.resize(j + 1, 0.0);
        h.push(col);

        let k = h.len();
        // Rayleigh-Ritz on the pencil: V' A V y = theta y (V' B V = I)
        let hm = DMatrix::from_fn(k, k, |r, c| {
            if c <= r { h[r].get(c).copied().unwrap_or(0.0) } else { h[c][r] }
        });
        let se = hm.symmetric_eigen();
        let mut idx = 0;
        for i in 1..k {
            if se.eigenvalues[i] < se.eigenvalues[idx] {
                idx = i;
            }
        }
        let theta = se.eigenvalues[idx];
        let mut x = vec![0.0; dim];
        for (vi, &yi) in v.iter().zip(se.eigenvectors.column(idx).iter()) {
            axpy(yi, vi, &mut x);
        }
        project_off(&fixed, &mut x);
        // residual of the pencil
        let mut rvec = op_a.matvec(&x);
        let bx = op_b.matvec(&x);
        axpy(-theta, &bx, &mut rvec);
        project_off(&fixed, &mut rvec);
        let res = norm(&rvec);
        let xn = norm(&x);
        let pair = RitzPair {
            value: theta,
            vector: x.iter().map(|a| a / xn.max(1e-300)).collect(),
            residual: res / xn.max(1e-300),
        };
        let better = best.as_ref().map(|b| pair.residual < b.residual).unwrap_or(true);
        if better {
            best = Some(pair);
        }
        // A tiny residual alone can be a converged-but-interior pair when
        // the start vector misses the extreme direction; insist on a few
        // steps so the Krylov space has had a chance to reach it.
        let min_steps = 4.min(eff_dim);
        let best_res = best.as_ref().unwrap().residual;
        if k >= min_steps && best_res <= cfg.tol * (1.0 + theta.abs()) {
            let p = best.take().unwrap();
            return Ok(assemble(vec![p], Which::Smallest, step + 1, true));
        }
        if k >= max_steps {
            break;
        }

        // next direction: u = B^{-1} A v_j, B-orthogonalized against the basis
        let mut u: Vec<f64> = cg_solve(op_b, &Array1::from(av), &basis_arrays, cg_tol)?.to_vec();
        project_off(&fixed, &mut u);
        for _ in 0..2 {
            for (vi, bvi) in v.iter().zip(&bv) {
                let d = dot(bvi, &u);
                axpy(-d, vi, &mut u);
            }
        }
        let mut bu = op_b.matvec(&u);
        project_off(&fixed, &mut bu);
        let ubu = dot(&u, &bu);
        if ubu > 1e-20 {
            let s = ubu.sqrt();
            u.iter_mut().for_each(|x| *x /= s);
            bu.iter_mut().for_each(|x| *x /= s);
            v.push(u);
            bv.push(bu);
        } else {
            // B-invariant subspace; restart with a fresh random direction
            let mut found = false;
            for _ in 0..32 {
                let mut f = random_direction(dim, &mut rng);
                project_off(&fixed, &mut f);
                for (vi, bvi) in v.iter().zip(&bv) {
                    let d = dot(bvi, &f);
                    axpy(-d, vi, &mut f);
                }
                let mut bf = op_b.matvec(&f);
                project_off(&fixed, &mut bf);
                let fbf = dot(&f, &bf);
                if fbf > 1e-16 {
                    let s = fbf.sqrt();
                    f.iter_mut().for_each(|x| *x /= s);
                    bf.iter_mut().for_each(|x| *x /= s);
                    v.push(f);
                    bv.push(bf);
                    found = true;
                    break;
                }
            }
            if !found {
                break;
            }
        }
    }
    let p = best.unwrap();
    let res = p.residual;
    let iters = h.len();
    let out = assemble(vec![p], Which::Smallest, iters, false);
    Err(EigenError::NotConverged {
        iterations: iters,
        worst_residual: res,
        best: Box::new(out),
    })
}
