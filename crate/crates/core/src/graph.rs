//! Temporal graph data model, multiplex view, and matrix-free operators.
//!
//! All node-level vectors over the multiplex view use the indexing
//! convention `idx(v, t) = t * n + v`, shared by every module in this crate.
//! None of the operators materializes an `(nm)²` matrix; they expose a
//! symmetric matrix-vector product only.

use ndarray::{Array1, Array2};
use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

/// Errors produced by graph construction, validation and parsing.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("snapshot {t}: self-loop at vertex {v}")]
    SelfLoop { t: usize, v: usize },
    #[error("snapshot {t}: duplicate edge ({u}, {v})")]
    DuplicateEdge { t: usize, u: usize, v: usize },
    #[error("snapshot {t}: edge ({u}, {v}) has non-positive weight {w}")]
    NonPositiveWeight { t: usize, u: usize, v: usize, w: f64 },
    #[error("snapshot {t}: vertex {v} out of range (n = {n})")]
    VertexOutOfRange { t: usize, v: usize, n: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Multiplex node index of vertex `v` at snapshot `t` for a graph with `n`
/// vertices per snapshot.
#[inline]
pub fn multiplex_index(n: usize, v: usize, t: usize) -> usize {
    t * n + v
}

/// A sequence of weighted undirected snapshots over a fixed vertex set.
///
/// Each snapshot stores its edges once as `(u, v, w)` with `u < v` and
/// `w > 0`. Immutable after construction; validation happens in the
/// constructor, so every reachable value satisfies the invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalGraph {
    n: usize,
    snapshots: Vec<Vec<(usize, usize, f64)>>,
}

impl TemporalGraph {
    /// Builds and validates a temporal graph. Edge endpoints may be given in
    /// either order; they are stored canonically with `u < v`.
    pub fn new(
        n: usize,
        snapshots: Vec<Vec<(usize, usize, f64)>>,
    ) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::InvalidParams("vertex count must be >= 1".into()));
        }
        if snapshots.is_empty() {
            return Err(GraphError::InvalidParams("at least one snapshot required".into()));
        }
        let mut canon = Vec::with_capacity(snapshots.len());
        for (t, edges) in snapshots.into_iter().enumerate() {
            let mut seen = HashSet::with_capacity(edges.len());
            let mut list = Vec::with_capacity(edges.len());
            for (u, v, w) in edges {
                if u >= n {
                    return Err(GraphError::VertexOutOfRange { t, v: u, n });
                }
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { t, v, n });
                }
                if u == v {
                    return Err(GraphError::SelfLoop { t, v });
                }
                let (a, b) = if u < v { (u, v) } else { (v, u) };
                if !w.is_finite() || w <= 0.0 {
                    return Err(GraphError::NonPositiveWeight { t, u: a, v: b, w });
                }
                if !seen.insert((a, b)) {
                    return Err(GraphError::DuplicateEdge { t, u: a, v: b });
                }
                list.push((a, b, w));
            }
            canon.push(list);
        }
        Ok(Self { n, snapshots: canon })
    }

    /// Vertex count shared by all snapshots.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Snapshot count.
    pub fn m(&self) -> usize {
        self.snapshots.len()
    }

    /// Total node count of the multiplex view.
    pub fn node_count(&self) -> usize {
        self.n * self.m()
    }

    /// Edges of snapshot `t`, stored as `(u, v, w)` with `u < v`.
    pub fn edges(&self, t: usize) -> &[(usize, usize, f64)] {
        &self.snapshots[t]
    }

    /// All snapshots.
    pub fn snapshots(&self) -> &[Vec<(usize, usize, f64)>] {
        &self.snapshots
    }

    /// Multiplex node index of vertex `v` at snapshot `t`.
    #[inline]
    pub fn index(&self, v: usize, t: usize) -> usize {
        multiplex_index(self.n, v, t)
    }

    /// A single snapshot extracted as a one-snapshot temporal graph.
    pub fn snapshot_graph(&self, t: usize) -> TemporalGraph {
        TemporalGraph {
            n: self.n,
            snapshots: vec![self.snapshots[t].clone()],
        }
    }

    /// The union graph: one snapshot whose edge weights are the per-pair
    /// sums over all snapshots.
    pub fn union_graph(&self) -> TemporalGraph {
        let mut acc: std::collections::BTreeMap<(usize, usize), f64> =
            std::collections::BTreeMap::new();
        for edges in &self.snapshots {
            for &(u, v, w) in edges {
                *acc.entry((u, v)).or_insert(0.0) += w;
            }
        }
        TemporalGraph {
            n: self.n,
            snapshots: vec![acc.into_iter().map(|((u, v), w)| (u, v, w)).collect()],
        }
    }

    /// Parses the text edge-list format.
    ///
    /// The first non-comment line is `n m`; every following non-comment line
    /// is `t u v w` with `0 <= t < m`, `u != v` and `w > 0`. Lines starting
    /// with `#` and blank lines are skipped. Numbers use `.` as the decimal
    /// separator regardless of locale.
    pub fn parse_str(text: &str) -> Result<Self, GraphError> {
        let mut header: Option<(usize, usize)> = None;
        let mut snapshots: Vec<Vec<(usize, usize, f64)>> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str, what: &str| -> Result<usize, GraphError> {
                s.parse::<usize>().map_err(|_| GraphError::Parse {
                    line: lineno + 1,
                    msg: format!("invalid {what}: {s:?}"),
                })
            };
            match header {
                None => {
                    if fields.len() != 2 {
                        return Err(GraphError::Parse {
                            line: lineno + 1,
                            msg: "expected header `n m`".into(),
                        });
                    }
                    let n = parse(fields[0], "vertex count")?;
                    let m = parse(fields[1], "snapshot count")?;
                    if n == 0 || m == 0 {
                        return Err(GraphError::Parse {
                            line: lineno + 1,
                            msg: "n and m must be >= 1".into(),
                        });
                    }
                    header = Some((n, m));
                    snapshots = vec![Vec::new(); m];
                }
                Some((_, m)) => {
                    if fields.len() != 4 {
                        return Err(GraphError::Parse {
                            line: lineno + 1,
                            msg: "expected edge line `t u v w`".into(),
                        });
                    }
                    let t = parse(fields[0], "snapshot index")?;
                    if t >= m {
                        return Err(GraphError::Parse {
                            line: lineno + 1,
                            msg: format!("snapshot index {t} out of range (m = {m})"),
                        });
                    }
                    let u = parse(fields[1], "vertex id")?;
                    let v = parse(fields[2], "vertex id")?;
                    let w = fields[3].parse::<f64>().map_err(|_| GraphError::Parse {
                        line: lineno + 1,
                        msg: format!("invalid weight: {:?}", fields[3]),
                    })?;
                    snapshots[t].push((u, v, w));
                }
            }
        }
        let (n, _) = header.ok_or(GraphError::Parse {
            line: 0,
            msg: "missing header `n m`".into(),
        })?;
        Self::new(n, snapshots)
    }

    /// Serializes to the text edge-list format accepted by [`parse_str`].
    ///
    /// [`parse_str`]: TemporalGraph::parse_str
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.m());
        for (t, edges) in self.snapshots.iter().enumerate() {
            for &(u, v, w) in edges {
                let _ = writeln!(out, "{t} {u} {v} {w}");
            }
        }
        out
    }

    pub fn read_file<P: AsRef<Path>>(path: P) -> Result<Self, GraphError> {
        Self::parse_str(&std::fs::read_to_string(path)?)
    }

    pub fn write_file<P: AsRef<Path>>(&self, path: P) -> Result<(), GraphError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Validates a temporal graph.
///
/// Construction already establishes the invariants; this re-checks an
/// existing value and reports the first offending snapshot/edge.
pub fn validate(tg: &TemporalGraph) -> Result<(), GraphError> {
    TemporalGraph::new(tg.n, tg.snapshots.clone()).map(|_| ())
}

/// Swap costs for the temporal (inter-layer) edges of the multiplex view:
/// either a uniform constant or a per-(vertex, transition) table.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplexParams {
    beta: f64,
    swap_costs: Option<Array2<f64>>,
}

impl MultiplexParams {
    /// Uniform swap cost `beta >= 0` for every temporal edge.
    pub fn uniform(beta: f64) -> Result<Self, GraphError> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(GraphError::InvalidParams(format!(
                "swap cost beta must be finite and >= 0, got {beta}"
            )));
        }
        Ok(Self { beta, swap_costs: None })
    }

    /// Per-(vertex, transition) swap costs with shape `n x (m - 1)`;
    /// `beta` is retained for reporting and as the shift-constant fallback.
    pub fn with_swap_costs(beta: f64, costs: Array2<f64>) -> Result<Self, GraphError> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(GraphError::InvalidParams(format!(
                "swap cost beta must be finite and >= 0, got {beta}"
            )));
        }
        if costs.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(GraphError::InvalidParams(
                "swap costs must be finite and >= 0".into(),
            ));
        }
        Ok(Self { beta, swap_costs: Some(costs) })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_uniform(&self) -> bool {
        self.swap_costs.is_none()
    }

    /// Cost of the temporal edge between `(v, t)` and `(v, t + 1)`.
    #[inline]
    pub fn swap_cost(&self, v: usize, t: usize) -> f64 {
        match &self.swap_costs {
            Some(c) => c[[v, t]],
            None => self.beta,
        }
    }

    /// Largest swap cost over all temporal edges.
    pub fn max_swap_cost(&self) -> f64 {
        match &self.swap_costs {
            Some(c) => c.iter().copied().fold(0.0, f64::max),
            None => self.beta,
        }
    }

    fn check_shape(&self, n: usize, m: usize) -> Result<(), GraphError> {
        if let Some(c) = &self.swap_costs {
            let want = (n, m.saturating_sub(1));
            if c.dim() != want {
                return Err(GraphError::InvalidParams(format!(
                    "swap cost table has shape {:?}, expected {:?}",
                    c.dim(),
                    want
                )));
            }
        }
        Ok(())
    }
}

/// The multiplex view of a temporal graph: `nm` nodes `idx(v, t) = t*n + v`,
/// intra-layer edges from each snapshot, and a temporal edge between
/// `idx(v, t)` and `idx(v, t+1)` for every vertex and `t < m - 1`, weighted
/// by the swap cost.
#[derive(Debug, Clone, Copy)]
pub struct MultiplexView<'a> {
    graph: &'a TemporalGraph,
    params: &'a MultiplexParams,
}

impl<'a> MultiplexView<'a> {
    pub fn new(
        graph: &'a TemporalGraph,
        params: &'a MultiplexParams,
    ) -> Result<Self, GraphError> {
        params.check_shape(graph.n(), graph.m())?;
        Ok(Self { graph, params })
    }

    pub fn graph(&self) -> &'a TemporalGraph {
        self.graph
    }

    pub fn params(&self) -> &'a MultiplexParams {
        self.params
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    #[inline]
    pub fn index(&self, v: usize, t: usize) -> usize {
        self.graph.index(v, t)
    }
}

/// An abstract symmetric linear map exposed only through its matrix-vector
/// product. Implementations are pure and safe to share across threads.
pub trait SpectralOperator: Sync {
    /// Dimension of the square operator.
    fn dim(&self) -> usize;

    /// Computes `y = A x`. Both slices have length `dim()`.
    fn apply(&self, x: &[f64], y: &mut [f64]);

    /// Convenience wrapper returning a freshly allocated result.
    fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        self.apply(x, &mut y);
        y
    }

    /// Materializes the operator column by column. Intended for small
    /// dimensions (tests, oracles, dense fallbacks).
    fn to_dense(&self) -> Array2<f64> {
        let d = self.dim();
        let mut a = Array2::zeros((d, d));
        let mut x = vec![0.0; d];
        let mut y = vec![0.0; d];
        for j in 0..d {
            x[j] = 1.0;
            self.apply(&x, &mut y);
            for i in 0..d {
                a[[i, j]] = y[i];
            }
            x[j] = 0.0;
        }
        a
    }
}

impl<T: SpectralOperator + ?Sized> SpectralOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        (**self).apply(x, y)
    }
}

/// Per-multiplex-node weighted degrees, intra-layer edges only. Entry
/// `idx(v, t)` is the weighted degree of `v` in snapshot `t`.
pub fn degree_vector(tg: &TemporalGraph) -> Array1<f64> {
    let n = tg.n();
    let mut deg = Array1::zeros(tg.node_count());
    for (t, edges) in tg.snapshots().iter().enumerate() {
        for &(u, v, w) in edges {
            deg[t * n + u] += w;
            deg[t * n + v] += w;
        }
    }
    deg
}

/// The Laplacian of the multiplex view (optionally symmetrically normalized
/// by the pseudo-inverse square root of the intra-layer degree matrix).
///
/// The matvec runs in `O(nm + sum_t |E_t|)`: per snapshot the snapshot
/// Laplacian, plus the temporal coupling terms along each vertex line.
#[derive(Debug, Clone)]
pub struct MultiplexLaplacian {
    n: usize,
    m: usize,
    // adjacency per multiplex node, neighbor stored as a local vertex id
    adj: Vec<Vec<(usize, f64)>>,
    deg: Vec<f64>,
    params: MultiplexParams,
    d_inv_sqrt: Option<Vec<f64>>,
}

impl MultiplexLaplacian {
    fn build(view: &MultiplexView, normalized: bool) -> Self {
        let tg = view.graph();
        let (n, m) = (tg.n(), tg.m());
        let mut adj = vec![Vec::new(); n * m];
        let mut deg = vec![0.0; n * m];
        for (t, edges) in tg.snapshots().iter().enumerate() {
            for &(u, v, w) in edges {
                adj[t * n + u].push((v, w));
                adj[t * n + v].push((u, w));
                deg[t * n + u] += w;
                deg[t * n + v] += w;
            }
        }
        // Zero-degree entries map to 0: the true pseudo-inverse convention,
        // so isolated vertices are tolerated rather than rejected.
        let d_inv_sqrt = normalized.then(|| {
            deg.iter()
                .map(|&d| if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 })
                .collect()
        });
        Self {
            n,
            m,
            adj,
            deg,
            params: view.params().clone(),
            d_inv_sqrt,
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.d_inv_sqrt.is_some()
    }

    fn apply_plain(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n;
        for (i, nbrs) in self.adj.iter().enumerate() {
            let base = (i / n) * n;
            let mut acc = self.deg[i] * x[i];
            for &(v, w) in nbrs {
                acc -= w * x[base + v];
            }
            y[i] = acc;
        }
        for t in 0..self.m.saturating_sub(1) {
            for v in 0..n {
                let a = t * n + v;
                let b = a + n;
                let c = self.params.swap_cost(v, t);
                let d = c * (x[a] - x[b]);
                y[a] += d;
                y[b] -= d;
            }
        }
    }
}

impl SpectralOperator for MultiplexLaplacian {
    fn dim(&self) -> usize {
        self.n * self.m
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        match &self.d_inv_sqrt {
            None => self.apply_plain(x, y),
            Some(s) => {
                let z: Vec<f64> = x.iter().zip(s).map(|(a, b)| a * b).collect();
                self.apply_plain(&z, y);
                for (yi, si) in y.iter_mut().zip(s) {
                    *yi *= si;
                }
            }
        }
    }
}

/// Builds the multiplex Laplacian operator. The all-ones vector is in its
/// null space.
pub fn multiplex_laplacian(view: &MultiplexView) -> MultiplexLaplacian {
    MultiplexLaplacian::build(view, false)
}

/// Builds the symmetrically normalized multiplex Laplacian
/// `D^{+1/2} L D^{+1/2}`, with zero-degree coordinates mapped to zero.
pub fn normalized_operator(view: &MultiplexView) -> MultiplexLaplacian {
    MultiplexLaplacian::build(view, true)
}

/// Block-diagonal complete-graph Laplacian: per snapshot block,
/// `y_t = n * x_t - sum(x_t) * 1`. Its null space is spanned by the
/// per-snapshot constant vectors, and `C ∘ C = n C`.
#[derive(Debug, Clone, Copy)]
pub struct COperator {
    n: usize,
    m: usize,
}

impl COperator {
    pub fn new(n: usize, m: usize) -> Self {
        assert!(n >= 1 && m >= 1);
        Self { n, m }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Orthonormal per-snapshot constant vectors, the null-space basis.
    pub fn null_basis(&self) -> Vec<Array1<f64>> {
        let scale = 1.0 / (self.n as f64).sqrt();
        (0..self.m)
            .map(|t| {
                let mut e = Array1::zeros(self.n * self.m);
                for v in 0..self.n {
                    e[t * self.n + v] = scale;
                }
                e
            })
            .collect()
    }
}

impl SpectralOperator for COperator {
    fn dim(&self) -> usize {
        self.n * self.m
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let nf = self.n as f64;
        for t in 0..self.m {
            let block = &x[t * self.n..(t + 1) * self.n];
            let s: f64 = block.iter().sum();
            for (yi, xi) in y[t * self.n..(t + 1) * self.n].iter_mut().zip(block) {
                *yi = nf * xi - s;
            }
        }
    }
}

/// Builds the per-snapshot complete-graph Laplacian operator of dimension
/// `n * m`.
pub fn c_operator(n: usize, m: usize) -> COperator {
    COperator::new(n, m)
}

/// `shift * C - L`: the operator whose largest eigenvector relaxes the
/// temporal cut problem. `L` may be the plain or the normalized multiplex
/// Laplacian.
#[derive(Debug, Clone)]
pub struct ShiftedLaplacian {
    pub shift: f64,
    c: COperator,
    lap: MultiplexLaplacian,
}

impl ShiftedLaplacian {
    pub fn new(shift: f64, view: &MultiplexView, normalized: bool) -> Self {
        let lap = MultiplexLaplacian::build(view, normalized);
        Self {
            shift,
            c: COperator::new(lap.n, lap.m),
            lap,
        }
    }
}

impl SpectralOperator for ShiftedLaplacian {
    fn dim(&self) -> usize {
        self.lap.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut lx = vec![0.0; x.len()];
        self.lap.apply(x, &mut lx);
        self.c.apply(x, y);
        for (yi, li) in y.iter_mut().zip(&lx) {
            *yi = self.shift * *yi - li;
        }
    }
}

/// `C ∘ L ∘ C`: the costlier cross-check operator whose (m+1)-th smallest
/// eigenvector also relaxes the temporal cut problem.
#[derive(Debug, Clone)]
pub struct ClcOperator {
    c: COperator,
    lap: MultiplexLaplacian,
}

impl ClcOperator {
    pub fn new(view: &MultiplexView, normalized: bool) -> Self {
        let lap = MultiplexLaplacian::build(view, normalized);
        Self {
            c: COperator::new(lap.n, lap.m),
            lap,
        }
    }

    pub fn null_basis(&self) -> Vec<Array1<f64>> {
        self.c.null_basis()
    }
}

impl SpectralOperator for ClcOperator {
    fn dim(&self) -> usize {
        self.lap.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut a = vec![0.0; x.len()];
        let mut b = vec![0.0; x.len()];
        self.c.apply(x, &mut a);
        self.lap.apply(&a, &mut b);
        self.c.apply(&b, y);
    }
}
