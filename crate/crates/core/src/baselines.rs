//! Comparison methods: per-snapshot cuts (SINGLE), one cut of the union
//! graph (UNION), and a direct sweep of the multiplex Laplacian's Fiedler
//! vector (LAP). All three return a [`TemporalCut`] scored by the shared
//! objectives.

use crate::cuts::{sweep_round, CutError, Objective, TemporalCut};
use crate::eigen::{extreme_eigs, EigenConfig, Which};
use crate::graph::{
    multiplex_laplacian, normalized_operator, MultiplexParams, MultiplexView, TemporalGraph,
};
use ndarray::{Array1, Array2};

fn snapshot_fiedler_cut(
    snap: &TemporalGraph,
    kind: Objective,
    cfg: &EigenConfig,
) -> Result<Option<Vec<usize>>, CutError> {
    let n = snap.n();
    if snap.edges(0).is_empty() {
        return Ok(None);
    }
    let params = MultiplexParams::uniform(0.0)?;
    let view = MultiplexView::new(snap, &params)?;
    let lap = match kind {
        Objective::Sparsest => multiplex_laplacian(&view),
        Objective::Normalized => normalized_operator(&view),
    };
    let mut cfg = cfg.clone();
    cfg.deflation_basis
        .push(Array1::from_elem(n, 1.0 / (n as f64).sqrt()));
    let res = extreme_eigs(&lap, 1, Which::Smallest, &cfg)?;
    match sweep_round(res.eigenvectors[0].as_slice().unwrap(), snap, &params, kind) {
        Ok((cut, _)) => Ok(Some((0..n).map(|v| cut.label(v, 0)).collect())),
        Err(CutError::NoFeasiblePrefix) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Best spectral cut per snapshot, then orientations aligned greedily
/// left-to-right to minimize side changes against the previous snapshot.
/// Snapshots without a feasible cut inherit the previous labels.
pub fn single_baseline(
    tg: &TemporalGraph,
    params: &MultiplexParams,
    kind: Objective,
) -> Result<TemporalCut, CutError> {
    single_baseline_with(tg, params, kind, &EigenConfig::default())
}

pub fn single_baseline_with(
    tg: &TemporalGraph,
    params: &MultiplexParams,
    kind: Objective,
    cfg: &EigenConfig,
) -> Result<TemporalCut, CutError> {
    MultiplexView::new(tg, params)?;
    let (n, m) = (tg.n(), tg.m());
    let mut labels = Array2::zeros((n, m));
    for t in 0..m {
        let snap = tg.snapshot_graph(t);
        let this = snapshot_fiedler_cut(&snap, kind, cfg)?;
        match this {
            Some(mut ls) => {
                if t > 0 {
                    let disagree = (0..n).filter(|&v| ls[v] != labels[[v, t - 1]]).count();
                    if disagree * 2 > n {
                        for l in ls.iter_mut() {
                            *l = 1 - *l;
                        }
                    }
                }
                for v in 0..n {
                    labels[[v, t]] = ls[v];
                }
            }
            None => {
                for v in 0..n {
                    labels[[v, t]] = if t > 0 { labels[[v, t - 1]] } else { 0 };
                }
            }
        }
    }
    Ok(TemporalCut::with_k(labels, 2))
}

/// One spectral cut of the union graph (per-pair weight sums over
/// snapshots), replicated across all snapshots; its swap count is zero by
/// construction.
pub fn union_baseline(
    tg: &TemporalGraph,
    params: &MultiplexParams,
    kind: Objective,
) -> Result<TemporalCut, CutError> {
    union_baseline_with(tg, params, kind, &EigenConfig::default())
}

pub fn union_baseline_with(
    tg: &TemporalGraph,
    params: &MultiplexParams,
    kind: Objective,
    cfg: &EigenConfig,
) -> Result<TemporalCut, CutError> {
    MultiplexView::new(tg, params)?;
    let (n, m) = (tg.n(), tg.m());
    let union = tg.union_graph();
    let per = snapshot_fiedler_cut(&union, kind, cfg)?.ok_or(CutError::NoFeasiblePrefix)?;
    let labels = Array2::from_shape_fn((n, m), |(v, _)| per[v]);
    Ok(TemporalCut::with_k(labels, 2))
}

/// Sweeps the Fiedler vector of the multiplex Laplacian itself under the
/// temporal objective. Prefixes that only separate whole snapshots have a
/// zero denominator and are skipped by the sweep.
pub fn lap_baseline(
    tg: &TemporalGraph,
    params: &MultiplexParams,
    kind: Objective,
) -> Result<TemporalCut, CutError> {
    lap_baseline_with(tg, params, kind, &EigenConfig::default())
}

pub fn lap_baseline_with(
    tg: &TemporalGraph,
    params: &MultiplexParams,
    kind: Objective,
    cfg: &EigenConfig,
) -> Result<TemporalCut, CutError> {
    let view = MultiplexView::new(tg, params)?;
    let lap = match kind {
        Objective::Sparsest => multiplex_laplacian(&view),
        Objective::Normalized => normalized_operator(&view),
    };
    let dim = tg.node_count();
    let mut cfg = cfg.clone();
    cfg.deflation_basis
        .push(Array1::from_elem(dim, 1.0 / (dim as f64).sqrt()));
    let res = extreme_eigs(&lap, 1, Which::Smallest, &cfg)?;
    let (cut, _) = sweep_round(res.eigenvectors[0].as_slice().unwrap(), tg, params, kind)?;
    Ok(cut)
}
