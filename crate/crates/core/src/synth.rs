//! Planted moving-partition benchmark generator.
//!
//! Vertices live on a `ceil(sqrt(n)) x ceil(sqrt(n))` grid and connect to
//! their h-hop neighbors (Chebyshev distance at most `h`). A planted
//! `ceil(sqrt(k)) x ceil(sqrt(k))` sub-grid slides down the main diagonal,
//! one cell every [`MOVE_PERIOD`] snapshots (clamped at the border).
//! Vertices inside the partition get the value `1 + N(0, eps)`, the rest
//! `N(0, eps)`, redrawn per (vertex, snapshot); an edge's weight is the
//! similarity kernel `exp(-KERNEL_STEEPNESS * |pi(u) - pi(v)|)`, so edges
//! within either side are heavy and boundary edges light — the planted cut
//! is the cheap place to cut, strictly separable at `eps = 0`.

use crate::cuts::TemporalCut;
use crate::graph::{GraphError, TemporalGraph};
use ndarray::Array2;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid generator config: {0}")]
    ConfigInvalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Generator parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    /// Vertex count; vertices are the first `n` cells of the grid.
    pub n: usize,
    /// Planted partition size parameter (`k < n`); the planted block has
    /// `ceil(sqrt(k))^2` cells.
    pub k: usize,
    /// Hop radius of grid adjacency.
    pub h: usize,
    /// Noise level in `[0, 1]`.
    pub eps: f64,
    /// Snapshot count.
    pub m: usize,
    pub seed: u64,
}

impl SynthConfig {
    fn validate(&self) -> Result<(), SynthError> {
        if self.n < 2 {
            return Err(SynthError::ConfigInvalid("n must be >= 2".into()));
        }
        if self.k == 0 || self.k >= self.n {
            return Err(SynthError::ConfigInvalid(format!(
                "k must satisfy 1 <= k < n, got k = {}, n = {}",
                self.k, self.n
            )));
        }
        if self.h == 0 {
            return Err(SynthError::ConfigInvalid("h must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.eps) {
            return Err(SynthError::ConfigInvalid(format!(
                "eps must be in [0, 1], got {}",
                self.eps
            )));
        }
        if self.m == 0 {
            return Err(SynthError::ConfigInvalid("m must be >= 1".into()));
        }
        Ok(())
    }
}

/// Similarity-kernel bandwidth: sharp enough that the planted boundary is
/// a genuine spectral bottleneck at desk scales.
pub const KERNEL_STEEPNESS: f64 = 6.0;

/// The planted block advances one diagonal cell every this many snapshots.
pub const MOVE_PERIOD: usize = 2;

fn isqrt_ceil(x: usize) -> usize {
    let mut s = (x as f64).sqrt() as usize;
    while s * s < x {
        s += 1;
    }
    s
}

/// Generates the temporal graph together with the planted ground-truth
/// labels (1 inside the moving block). Deterministic given the seed.
pub fn generate(cfg: &SynthConfig) -> Result<(TemporalGraph, TemporalCut), SynthError> {
    cfg.validate()?;
    let side = isqrt_ceil(cfg.n);
    let block = isqrt_ceil(cfg.k);
    let max_off = side.saturating_sub(block);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut labels = Array2::zeros((cfg.n, cfg.m));
    let mut values = Array2::zeros((cfg.n, cfg.m));
    for t in 0..cfg.m {
        let off = (t / MOVE_PERIOD).min(max_off);
        for v in 0..cfg.n {
            let (row, col) = (v / side, v % side);
            let inside = row >= off && row < off + block && col >= off && col < off + block;
            let noise: f64 = rng.sample(StandardNormal);
            values[[v, t]] = f64::from(u8::from(inside)) + cfg.eps * noise;
            labels[[v, t]] = usize::from(inside);
        }
    }

    let h = cfg.h as isize;
    let mut snapshots = Vec::with_capacity(cfg.m);
    for t in 0..cfg.m {
        let mut edges = Vec::new();
        for v in 0..cfg.n {
            let (row, col) = ((v / side) as isize, (v % side) as isize);
            for dr in -h..=h {
                for dc in -h..=h {
                    let (r2, c2) = (row + dr, col + dc);
                    if r2 < 0 || c2 < 0 || r2 >= side as isize || c2 >= side as isize {
                        continue;
                    }
                    let u = (r2 as usize) * side + c2 as usize;
                    if u <= v || u >= cfg.n {
                        continue;
                    }
                    let w =
                        (-KERNEL_STEEPNESS * (values[[v, t]] - values[[u, t]]).abs()).exp();
                    edges.push((v, u, w));
                }
            }
        }
        snapshots.push(edges);
    }
    let tg = TemporalGraph::new(cfg.n, snapshots)?;
    Ok((tg, TemporalCut::new(labels)))
}

/// Ground-truth label file: one `t v label` line per multiplex node.
pub fn format_labels(cut: &TemporalCut) -> String {
    let mut out = String::new();
    for t in 0..cut.m() {
        for v in 0..cut.n() {
            let _ = writeln!(out, "{t} {v} {}", cut.label(v, t));
        }
    }
    out
}
