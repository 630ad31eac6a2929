//! Temporal cut objectives and the exact spectral cut methods.
//!
//! The two objectives share a numerator (intra-snapshot cut weight plus the
//! swap penalty for vertices changing sides between consecutive snapshots)
//! and differ in the balance denominator: products of side sizes for the
//! sparsest ratio, products of side volumes for the normalized ratio.
//!
//! [`stc_relax`] is the production relaxation: the largest eigenvector of
//! `K*C - L` (or its normalized form), rounded by [`sweep_round`].
//! [`clc_relax`] is the costlier `C L C` route, kept as a cross-check.

use crate::eigen::{extreme_eigs, EigenConfig, EigenError, Which};
use crate::graph::{
    degree_vector, ClcOperator, GraphError, MultiplexParams, MultiplexView, ShiftedLaplacian,
    TemporalGraph,
};
use ndarray::{Array1, Array2};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Which ratio a cut is scored by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Cut-plus-swap weight over summed products of side sizes.
    Sparsest,
    /// Cut-plus-swap weight over summed products of side volumes.
    Normalized,
}

impl Objective {
    pub fn as_str(&self) -> &'static str {
        match self {
            Objective::Sparsest => "sparsest",
            Objective::Normalized => "normalized",
        }
    }
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Objective {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sparsest" => Ok(Objective::Sparsest),
            "normalized" => Ok(Objective::Normalized),
            other => Err(format!("unknown objective {other:?}")),
        }
    }
}

/// A per-(vertex, snapshot) partition assignment. Binary cuts use labels
/// `{0, 1}`; side 1 plays the role of the indicated set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalCut {
    labels: Array2<usize>, // shape (n, m)
    k: usize,
}

impl TemporalCut {
    /// Wraps a label array; `k` is inferred as `max label + 1`.
    pub fn new(labels: Array2<usize>) -> Self {
        let k = labels.iter().copied().max().map_or(1, |x| x + 1);
        Self { labels, k }
    }

    /// Wraps a label array with an explicit partition count (some of the
    /// `k` classes may be empty).
    pub fn with_k(labels: Array2<usize>, k: usize) -> Self {
        let seen = labels.iter().copied().max().map_or(1, |x| x + 1);
        Self { labels, k: k.max(seen) }
    }

    /// Binary cut from a membership predicate over `(v, t)`.
    pub fn binary(n: usize, m: usize, mut in_x: impl FnMut(usize, usize) -> bool) -> Self {
        let labels = Array2::from_shape_fn((n, m), |(v, t)| usize::from(in_x(v, t)));
        Self { labels, k: 2 }
    }

    pub fn n(&self) -> usize {
        self.labels.nrows()
    }

    pub fn m(&self) -> usize {
        self.labels.ncols()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn label(&self, v: usize, t: usize) -> usize {
        self.labels[[v, t]]
    }

    pub fn labels(&self) -> &Array2<usize> {
        &self.labels
    }

    /// The complementary binary cut.
    pub fn complement(&self) -> Result<TemporalCut, CutError> {
        if self.k > 2 {
            return Err(CutError::NotBinary(self.k));
        }
        Ok(TemporalCut {
            labels: self.labels.mapv(|l| 1 - l),
            k: 2,
        })
    }

    /// The stacked `±1` indicator over multiplex nodes (`+1` for side 1),
    /// in `idx(v, t) = t*n + v` order.
    pub fn indicator(&self) -> Result<Vec<f64>, CutError> {
        if self.k > 2 {
            return Err(CutError::NotBinary(self.k));
        }
        let (n, m) = (self.n(), self.m());
        let mut x = vec![0.0; n * m];
        for t in 0..m {
            for v in 0..n {
                x[t * n + v] = if self.labels[[v, t]] == 1 { 1.0 } else { -1.0 };
            }
        }
        Ok(x)
    }
}

/// Score breakdown for a binary temporal cut.
#[derive(Debug, Clone, PartialEq)]
pub struct CutReport {
    /// Total intra-snapshot weight crossing the cut.
    pub cut_weight: f64,
    /// Number of side changes between consecutive snapshots (weighted by
    /// the per-vertex costs when those are in use).
    pub swaps: f64,
    pub objective: f64,
    pub objective_kind: Objective,
    pub beta: f64,
}

#[derive(Debug, Error)]
pub enum CutError {
    #[error("degenerate cut: balance denominator is zero")]
    DegenerateCut,
    #[error("no feasible sweep prefix")]
    NoFeasiblePrefix,
    #[error("expected a binary cut, got k = {0}")]
    NotBinary(usize),
    #[error("shape mismatch: cut {cut:?} vs graph {graph:?}")]
    ShapeMismatch {
        cut: (usize, usize),
        graph: (usize, usize),
    },
    #[error("instance too small: {0}")]
    TooSmall(String),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub(crate) struct ScoreParts {
    pub cut_weight: f64,
    pub swap_count: f64,
    pub swap_weighted: f64,
    pub size_denom: f64,
    pub vol_denom: f64,
}

pub(crate) fn score_parts(
    tg: &TemporalGraph,
    cut: &TemporalCut,
    params: &MultiplexParams,
) -> Result<ScoreParts, CutError> {
    if (cut.n(), cut.m()) != (tg.n(), tg.m()) {
        return Err(CutError::ShapeMismatch {
            cut: (cut.n(), cut.m()),
            graph: (tg.n(), tg.m()),
        });
    }
    if cut.k > 2 {
        return Err(CutError::NotBinary(cut.k));
    }
    let (n, m) = (tg.n(), tg.m());
    let deg = degree_vector(tg);
    let mut cut_weight = 0.0;
    for (t, edges) in tg.snapshots().iter().enumerate() {
        for &(u, v, w) in edges {
            if cut.label(u, t) != cut.label(v, t) {
                cut_weight += w;
            }
        }
    }
    let mut swap_count = 0.0;
    let mut swap_weighted = 0.0;
    for t in 0..m.saturating_sub(1) {
        for v in 0..n {
            if cut.label(v, t) != cut.label(v, t + 1) {
                swap_count += 1.0;
                swap_weighted += params.swap_cost(v, t);
            }
        }
    }
    let mut size_denom = 0.0;
    let mut vol_denom = 0.0;
    for t in 0..m {
        let mut sz = 0usize;
        let mut volx = 0.0;
        let mut vol = 0.0;
        for v in 0..n {
            vol += deg[t * n + v];
            if cut.label(v, t) == 1 {
                sz += 1;
                volx += deg[t * n + v];
            }
        }
        size_denom += (sz * (n - sz)) as f64;
        vol_denom += volx * (vol - volx);
    }
    Ok(ScoreParts {
        cut_weight,
        swap_count,
        swap_weighted,
        size_denom,
        vol_denom,
    })
}

fn report_from_parts(
    parts: &ScoreParts,
    params: &MultiplexParams,
    kind: Objective,
) -> Result<CutReport, CutError> {
    let numerator = parts.cut_weight
        + if params.is_uniform() {
            params.beta() * parts.swap_count
        } else {
            parts.swap_weighted
        };
    let denom = match kind {
        Objective::Sparsest => parts.size_denom,
        Objective::Normalized => parts.vol_denom,
    };
    if denom <= 0.0 {
        return Err(CutError::DegenerateCut);
    }
    Ok(CutReport {
        cut_weight: parts.cut_weight,
        swaps: if params.is_uniform() { parts.swap_count } else { parts.swap_weighted },
        objective: numerator / denom,
        objective_kind: kind,
        beta: params.beta(),
    })
}

/// Sparsity ratio of a binary temporal cut: cut-plus-swap weight over the
/// summed products of side sizes.
pub fn temporal_sparsity(
    tg: &TemporalGraph,
    cut: &TemporalCut,
    params: &MultiplexParams,
) -> Result<CutReport, CutError> {
    let parts = score_parts(tg, cut, params)?;
    report_from_parts(&parts, params, Objective::Sparsest)
}

/// Normalized ratio of a binary temporal cut: same numerator over the
/// summed products of side volumes.
pub fn normalized_temporal_sparsity(
    tg: &TemporalGraph,
    cut: &TemporalCut,
    params: &MultiplexParams,
) -> Result<CutReport, CutError> {
    let parts = score_parts(tg, cut, params)?;
    report_from_parts(&parts, params, Objective::Normalized)
}

/// Scores a cut under the requested objective.
pub fn score(
    tg: &TemporalGraph,
    cut: &TemporalCut,
    params: &MultiplexParams,
    kind: Objective,
) -> Result<CutReport, CutError> {
    match kind {
        Objective::Sparsest => temporal_sparsity(tg, cut, params),
        Objective::Normalized => normalized_temporal_sparsity(tg, cut, params),
    }
}

/// The spectral shift `K` that reorders the spectrum of `K*C - L` so its
/// largest eigenvector avoids the null space of `C`.
///
/// For the normalized form the Laplacian Rayleigh quotient is bounded by
/// `2 + 2*beta_max`, so `K = 3*(2 + 2*beta_max)`. For the plain form the
/// per-snapshot quotient is bounded by the larger of `n` and the maximum of
/// `deg(u) + deg(v)` over edges, giving `K = 3*(B + 2*beta_max)`; with
/// unit-bounded weights this reduces to `3*(n + 2*beta)`.
pub fn shift_constant(tg: &TemporalGraph, params: &MultiplexParams, kind: Objective) -> f64 {
    let beta_hat = params.max_swap_cost();
    match kind {
        Objective::Normalized => 3.0 * (2.0 + 2.0 * beta_hat),
        Objective::Sparsest => {
            let deg = degree_vector(tg);
            let n = tg.n();
            let mut edge_bound = 0.0f64;
            for (t, edges) in tg.snapshots().iter().enumerate() {
                for &(u, v, _) in edges {
                    edge_bound = edge_bound.max(deg[t * n + u] + deg[t * n + v]);
                }
            }
            3.0 * ((n as f64).max(edge_bound) + 2.0 * beta_hat)
        }
    }
}

fn global_constant(dim: usize) -> Array1<f64> {
    Array1::from_elem(dim, 1.0 / (dim as f64).sqrt())
}

/// Largest eigenpair of `K*C - L` (normalized form for
/// [`Objective::Normalized`]), deflated against the global constant. The
/// eigenvector is the relaxed temporal cut; round it with [`sweep_round`].
pub fn stc_relax(
    tg: &TemporalGraph,
    params: &MultiplexParams,
    kind: Objective,
) -> Result<(Array1<f64>, f64), CutError> {
    stc_relax_with(tg, params, kind, &EigenConfig::default())
}

/// [`stc_relax`] with solver control. The residual tolerance is interpreted
/// relative to the shifted operator's scale `K*n`.
pub fn stc_relax_with(
    tg: &TemporalGraph,
    params: &MultiplexParams,
    kind: Objective,
    cfg: &EigenConfig,
) -> Result<(Array1<f64>, f64), CutError> {
    let view = MultiplexView::new(tg, params)?;
    let dim = tg.node_count();
    if dim < 2 {
        return Err(CutError::TooSmall("need at least two multiplex nodes".into()));
    }
    let k = shift_constant(tg, params, kind);
    let op = ShiftedLaplacian::new(k, &view, kind == Objective::Normalized);
    let mut cfg = cfg.clone();
    cfg.tol *= 1.0 + k * tg.n() as f64;
    cfg.deflation_basis.push(global_constant(dim));
    let res = extreme_eigs(&op, 1, Which::Largest, &cfg)?;
    Ok((res.eigenvectors[0].clone(), res.eigenvalues[0]))
}

/// The relaxed objective value `(K*n - lambda_max) / n` implied by
/// [`stc_relax`]. For the sparsest objective this is a lower bound on the
/// optimal discrete ratio.
pub fn relaxation_bound(
    tg: &TemporalGraph,
    params: &MultiplexParams,
    kind: Objective,
) -> Result<f64, CutError> {
    let k = shift_constant(tg, params, kind);
    let (_, lambda) = stc_relax(tg, params, kind)?;
    let n = tg.n() as f64;
    Ok((k * n - lambda) / n)
}

/// Smallest eigenpair of `C L C` orthogonal to the per-snapshot constants,
/// equivalently its (m+1)-th smallest eigenvector. Cross-check route for
/// [`stc_relax`]; after sweeping, both relax the same program.
pub fn clc_relax(
    tg: &TemporalGraph,
    params: &MultiplexParams,
    kind: Objective,
) -> Result<(Array1<f64>, f64), CutError> {
    clc_relax_with(tg, params, kind, &EigenConfig::default())
}

pub fn clc_relax_with(
    tg: &TemporalGraph,
    params: &MultiplexParams,
    kind: Objective,
    cfg: &EigenConfig,
) -> Result<(Array1<f64>, f64), CutError> {
    let view = MultiplexView::new(tg, params)?;
    let op = ClcOperator::new(&view, kind == Objective::Normalized);
    let mut cfg = cfg.clone();
    cfg.tol *= 1.0 + (tg.n() as f64).powi(2); // C contributes a factor n on each side
    cfg.deflation_basis.extend(op.null_basis());
    let res = extreme_eigs(&op, 1, Which::Smallest, &cfg)?;
    Ok((res.eigenvectors[0].clone(), res.eigenvalues[0]))
}

/// Rounds a relaxed vector to the best feasible prefix cut.
///
/// Multiplex nodes are sorted by value (ties by node index) and every
/// prefix is scanned with incremental updates. A prefix is a candidate only
/// at a threshold between distinct values (a tie group is never split, so a
/// constant vector has no candidates); candidates with a zero denominator
/// are skipped and the feasible minimizer is returned (first such prefix on
/// ties). The prefix side gets label 0.
pub fn sweep_round(
    values: &[f64],
    tg: &TemporalGraph,
    params: &MultiplexParams,
    kind: Objective,
) -> Result<(TemporalCut, CutReport), CutError> {
    let (n, m) = (tg.n(), tg.m());
    let nm = n * m;
    if values.len() != nm {
        return Err(CutError::ShapeMismatch {
            cut: (values.len(), 1),
            graph: (n, m),
        });
    }
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nm];
    for (t, edges) in tg.snapshots().iter().enumerate() {
        for &(u, v, w) in edges {
            adj[t * n + u].push((t * n + v, w));
            adj[t * n + v].push((t * n + u, w));
        }
    }
    let deg = degree_vector(tg);
    let vol_total: Vec<f64> = (0..m)
        .map(|t| (0..n).map(|v| deg[t * n + v]).sum())
        .collect();

    let mut order: Vec<usize> = (0..nm).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap().then(a.cmp(&b)));

    let mut in_prefix = vec![false; nm];
    let mut cut_w = 0.0f64;
    let mut swap_w = 0.0f64;
    let mut sz = vec![0usize; m];
    let mut volx = vec![0.0f64; m];
    let mut size_denom = 0.0f64;
    let mut vol_denom = 0.0f64;
    let mut best: Option<(usize, f64)> = None;

    for (p, &node) in order.iter().enumerate() {
        let t = node / n;
        let v = node % n;
        for &(nbr, w) in &adj[node] {
            if in_prefix[nbr] {
                cut_w -= w;
            } else {
                cut_w += w;
            }
        }
        if t > 0 {
            let c = params.swap_cost(v, t - 1);
            if in_prefix[node - n] {
                swap_w -= c;
            } else {
                swap_w += c;
            }
        }
        if t + 1 < m {
            let c = params.swap_cost(v, t);
            if in_prefix[node + n] {
                swap_w -= c;
            } else {
                swap_w += c;
            }
        }
        in_prefix[node] = true;
        size_denom -= (sz[t] * (n - sz[t])) as f64;
        vol_denom -= volx[t] * (vol_total[t] - volx[t]);
        sz[t] += 1;
        volx[t] += deg[node];
        size_denom += (sz[t] * (n - sz[t])) as f64;
        vol_denom += volx[t] * (vol_total[t] - volx[t]);

        if p + 1 == nm {
            break;
        }
        if values[order[p + 1]] <= values[node] {
            continue; // not a level-set threshold
        }
        let denom = match kind {
            Objective::Sparsest => size_denom,
            Objective::Normalized => vol_denom,
        };
        if denom > 0.0 {
            let obj = (cut_w + swap_w) / denom;
            if best.is_none_or(|(_, b)| obj < b) {
                best = Some((p + 1, obj));
            }
        }
    }

    let (plen, _) = best.ok_or(CutError::NoFeasiblePrefix)?;
    let mut labels = Array2::zeros((n, m));
    for &node in &order[plen..] {
        labels[[node % n, node / n]] = 1;
    }
    let cut = TemporalCut { labels, k: 2 };
    // recompute the report non-incrementally so it matches the scorers
    let report = score(tg, &cut, params, kind)?;
    Ok((cut, report))
}

/// K-way temporal cut: embeds multiplex nodes into the top `k - 1`
/// eigenvectors of the shifted operator and clusters rows with seeded
/// farthest-first-initialized Lloyd iteration (at most 100 rounds).
pub fn kway_cut(
    tg: &TemporalGraph,
    params: &MultiplexParams,
    kind: Objective,
    k: usize,
    seed: u64,
) -> Result<TemporalCut, CutError> {
    let (n, m) = (tg.n(), tg.m());
    let nm = n * m;
    if k < 2 || k > nm {
        return Err(CutError::TooSmall(format!(
            "k-way cut needs 2 <= k <= nm, got k = {k}, nm = {nm}"
        )));
    }
    let view = MultiplexView::new(tg, params)?;
    let shift = shift_constant(tg, params, kind);
    let op = ShiftedLaplacian::new(shift, &view, kind == Objective::Normalized);
    let mut cfg = EigenConfig::with_seed(seed);
    cfg.tol *= 1.0 + shift * n as f64;
    cfg.deflation_basis.push(global_constant(nm));
    let res = extreme_eigs(&op, k - 1, Which::Largest, &cfg)?;

    let dims = k - 1;
    let mut rows = vec![vec![0.0; dims]; nm];
    for (j, v) in res.eigenvectors.iter().enumerate() {
        for i in 0..nm {
            rows[i][j] = v[i];
        }
    }
    let assign = lloyd_cluster(&rows, k, seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut labels = Array2::zeros((n, m));
    for (node, &c) in assign.iter().enumerate() {
        labels[[node % n, node / n]] = c;
    }
    Ok(TemporalCut::with_k(labels, k))
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn lloyd_cluster(rows: &[Vec<f64>], k: usize, seed: u64) -> Vec<usize> {
    let npts = rows.len();
    let dims = rows[0].len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // farthest-first initialization
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
    centers.push(rows[rng.random_range(0..npts)].clone());
    let mut min_d: Vec<f64> = rows.iter().map(|r| dist2(r, &centers[0])).collect();
    while centers.len() < k {
        let mut far = 0;
        for i in 1..npts {
            if min_d[i] > min_d[far] {
                far = i;
            }
        }
        centers.push(rows[far].clone());
        for i in 0..npts {
            let d = dist2(&rows[i], centers.last().unwrap());
            if d < min_d[i] {
                min_d[i] = d;
            }
        }
    }

    let mut assign = vec![0usize; npts];
    for _round in 0..100 {
        let mut changed = false;
        for (i, row) in rows.iter().enumerate() {
            let mut best = 0;
            let mut bd = dist2(row, &centers[0]);
            for (c, center) in centers.iter().enumerate().skip(1) {
                let d = dist2(row, center);
                if d < bd {
                    bd = d;
                    best = c;
                }
            }
            if assign[i] != best {
                assign[i] = best;
                changed = true;
            }
        }
        // recompute means; re-seed empty clusters with the worst-fit point
        let mut counts = vec![0usize; k];
        let mut sums = vec![vec![0.0; dims]; k];
        for (i, row) in rows.iter().enumerate() {
            counts[assign[i]] += 1;
            for (s, x) in sums[assign[i]].iter_mut().zip(row) {
                *s += x;
            }
        }
        for c in 0..k {
            if counts[c] == 0 {
                let mut far = 0;
                let mut fd = -1.0;
                for (i, row) in rows.iter().enumerate() {
                    let d = dist2(row, &centers[assign[i]]);
                    if d > fd {
                        fd = d;
                        far = i;
                    }
                }
                centers[c] = rows[far].clone();
                assign[far] = c;
                changed = true;
            } else {
                for (j, s) in sums[c].iter().enumerate() {
                    centers[c][j] = s / counts[c] as f64;
                }
            }
        }
        if !changed {
            break;
        }
    }
    assign
}
