//! Fast divide-and-conquer temporal cuts via per-snapshot low-rank spectra.
//!
//! Divide: for each snapshot, the bottom-r eigenpairs of the snapshot
//! Laplacian are computed and mapped to eigenpairs of the shifted block
//! `K*C - L_t` without ever forming it (the constant vector maps to
//! eigenvalue 0, any other eigenpair `(lambda, e)` to `K*n - lambda`).
//! Conquer: the mapped spectra are assembled into a small block-tridiagonal
//! matrix whose spectrum matches the full shifted operator exactly at full
//! rank; its top eigenvector is lifted back to the multiplex space and
//! rounded by the shared sweep.
//!
//! Truncating to rank `r < n` perturbs the top eigenvalue by at most twice
//! the largest discarded block eigenvalue, reported per run.

use crate::cuts::{shift_constant, sweep_round, CutError, CutReport, Objective, TemporalCut};
use crate::eigen::{dense_sym_eig, extreme_eigs, EigenConfig, EigenError, Which};
use crate::graph::{
    multiplex_laplacian, normalized_operator, GraphError, MultiplexParams, MultiplexView,
    TemporalGraph,
};
use ndarray::{Array1, Array2};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FstcError {
    #[error("rank {r} out of range for n = {n}")]
    InvalidRank { r: usize, n: usize },
    #[error("snapshot spectra have mismatched ranks ({0} vs {1})")]
    RankMismatch(usize, usize),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Cut(#[from] CutError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Mapped low-rank spectrum of one shifted snapshot block.
#[derive(Debug, Clone)]
pub struct SnapshotSpectrum {
    /// Snapshot index.
    pub t: usize,
    /// `n x r` orthonormal eigenvector basis; the constant vector is the
    /// last column.
    pub basis: Array2<f64>,
    /// Mapped eigenvalues of `K*C - L_t`, sorted descending (the constant
    /// direction contributes the trailing 0).
    pub eigenvalues: Vec<f64>,
    /// Largest discarded mapped eigenvalue (`K*n - lambda_{r+1}`), present
    /// when `r < n`; feeds the approximation error bound.
    pub tail_eigenvalue: Option<f64>,
}

impl SnapshotSpectrum {
    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }
}

/// Bottom-r spectrum of snapshot `t`'s Laplacian (normalized form for
/// [`Objective::Normalized`]), mapped to the shifted block's eigenpairs.
pub fn snapshot_spectrum(
    tg: &TemporalGraph,
    t: usize,
    r: usize,
    k_shift: f64,
    kind: Objective,
) -> Result<SnapshotSpectrum, FstcError> {
    snapshot_spectrum_with(tg, t, r, k_shift, kind, &EigenConfig::default())
}

pub fn snapshot_spectrum_with(
    tg: &TemporalGraph,
    t: usize,
    r: usize,
    k_shift: f64,
    kind: Objective,
    cfg: &EigenConfig,
) -> Result<SnapshotSpectrum, FstcError> {
    let n = tg.n();
    if r < 1 || r > n {
        return Err(FstcError::InvalidRank { r, n });
    }
    let snap = tg.snapshot_graph(t);
    let params = MultiplexParams::uniform(0.0).expect("beta 0 is valid");
    let view = MultiplexView::new(&snap, &params)?;
    let lap = match kind {
        Objective::Sparsest => multiplex_laplacian(&view),
        Objective::Normalized => normalized_operator(&view),
    };
    let constant = Array1::from_elem(n, 1.0 / (n as f64).sqrt());

    // r - 1 non-constant vectors for the basis, plus one for the tail bound
    let want_basis = r - 1;
    let request = (want_basis + usize::from(r < n)).min(n.saturating_sub(1));
    let mut cfg = cfg.clone();
    cfg.deflation_basis.push(constant.clone());
    let res = extreme_eigs(&lap, request, Which::Smallest, &cfg)?;

    let nf = n as f64;
    let mut basis = Array2::zeros((n, r));
    let mut eigenvalues = Vec::with_capacity(r);
    for j in 0..want_basis {
        for v in 0..n {
            basis[[v, j]] = res.eigenvectors[j][v];
        }
        eigenvalues.push(k_shift * nf - res.eigenvalues[j]);
    }
    for v in 0..n {
        basis[[v, r - 1]] = constant[v];
    }
    eigenvalues.push(0.0);
    let tail_eigenvalue = (request > want_basis)
        .then(|| k_shift * nf - res.eigenvalues[want_basis]);

    Ok(SnapshotSpectrum {
        t,
        basis,
        eigenvalues,
        tail_eigenvalue,
    })
}

/// The conquer-phase matrix: dense symmetric `rm x rm`, block tridiagonal.
#[derive(Debug, Clone)]
pub struct QMatrix {
    pub r: usize,
    pub m: usize,
    pub matrix: Array2<f64>,
}

/// Assembles the block-tridiagonal conquer matrix from per-snapshot
/// spectra: diagonal blocks `Lambda_t - beta * c_t * I` (boundary layers
/// couple once, interior twice), off-diagonal blocks
/// `beta * U_t' U_{t+1}`. Per-vertex swap costs use the projected forms
/// `U_t' diag(costs) U_{t+1}`.
pub fn assemble_q(
    spectra: &[SnapshotSpectrum],
    params: &MultiplexParams,
) -> Result<QMatrix, FstcError> {
    let m = spectra.len();
    assert!(m >= 1, "need at least one snapshot spectrum");
    let r = spectra[0].rank();
    for s in spectra {
        if s.rank() != r {
            return Err(FstcError::RankMismatch(r, s.rank()));
        }
    }
    let n = spectra[0].basis.nrows();
    let dim = r * m;
    let mut q = Array2::zeros((dim, dim));
    for (bt, s) in spectra.iter().enumerate() {
        let base = bt * r;
        for (j, lam) in s.eigenvalues.iter().enumerate() {
            q[[base + j, base + j]] = *lam;
        }
        if params.is_uniform() {
            let beta = params.beta();
            let couplings =
                f64::from(u8::from(bt > 0)) + f64::from(u8::from(bt + 1 < m));
            for j in 0..r {
                q[[base + j, base + j]] -= beta * couplings;
            }
        } else {
            // projected diagonal coupling: U_t' diag(sum of incident costs) U_t
            let mut costs = vec![0.0; n];
            for (v, c) in costs.iter_mut().enumerate() {
                if bt > 0 {
                    *c += params.swap_cost(v, bt - 1);
                }
                if bt + 1 < m {
                    *c += params.swap_cost(v, bt);
                }
            }
            for i in 0..r {
                for j in 0..=i {
                    let acc: f64 = (0..n)
                        .map(|v| s.basis[[v, i]] * costs[v] * s.basis[[v, j]])
                        .sum();
                    q[[base + i, base + j]] -= acc;
                    if i != j {
                        q[[base + j, base + i]] -= acc;
                    }
                }
            }
        }
    }
    for bt in 0..m.saturating_sub(1) {
        let (row, col) = (bt * r, (bt + 1) * r);
        let left = &spectra[bt].basis;
        let right = &spectra[bt + 1].basis;
        for i in 0..r {
            for j in 0..r {
                let acc: f64 = if params.is_uniform() {
                    params.beta()
                        * (0..n).map(|v| left[[v, i]] * right[[v, j]]).sum::<f64>()
                } else {
                    (0..n)
                        .map(|v| left[[v, i]] * params.swap_cost(v, bt) * right[[v, j]])
                        .sum()
                };
                q[[row + i, col + j]] = acc;
                q[[col + j, row + i]] = acc;
            }
        }
    }
    Ok(QMatrix { r, m, matrix: q })
}

/// The approximation error bound `2 * max_t lambda_{r+1}(K*C - L_t)`,
/// zero at full rank.
pub fn fstc_error_bound(spectra: &[SnapshotSpectrum]) -> f64 {
    2.0 * spectra
        .iter()
        .filter_map(|s| s.tail_eigenvalue)
        .fold(0.0f64, f64::max)
}

/// Per-run diagnostics of the divide-and-conquer solver.
#[derive(Debug, Clone)]
pub struct FstcDiagnostics {
    pub rank: usize,
    /// Largest discarded block eigenvalue over snapshots (`None` at full
    /// rank).
    pub lambda_tail_max: Option<f64>,
    /// `2 * lambda_tail_max`, the bound on the top-eigenvalue error.
    pub error_bound: f64,
    /// Top eigenvalue of the conquer matrix.
    pub q_top_eigenvalue: f64,
    /// At rank 1 only constant directions are available and the lifted
    /// vector carries no cut information.
    pub rank_too_small: bool,
}

/// Divide-and-conquer temporal cut at rank `r`.
pub fn fstc_cut(
    tg: &TemporalGraph,
    params: &MultiplexParams,
    kind: Objective,
    r: usize,
) -> Result<(TemporalCut, CutReport, FstcDiagnostics), FstcError> {
    fstc_cut_with(tg, params, kind, r, &EigenConfig::default())
}

/// Default rank when none is requested.
pub fn default_rank(n: usize) -> usize {
    n.min(64)
}

pub fn fstc_cut_with(
    tg: &TemporalGraph,
    params: &MultiplexParams,
    kind: Objective,
    r: usize,
    cfg: &EigenConfig,
) -> Result<(TemporalCut, CutReport, FstcDiagnostics), FstcError> {
    let (n, m) = (tg.n(), tg.m());
    if r < 1 || r > n {
        return Err(FstcError::InvalidRank { r, n });
    }
    MultiplexView::new(tg, params)?;
    let k_shift = shift_constant(tg, params, kind);

    // divide: snapshots are independent; seeds are derived per snapshot so
    // the result does not depend on scheduling
    let spectra: Vec<SnapshotSpectrum> = (0..m)
        .into_par_iter()
        .map(|t| {
            let mut c = cfg.clone();
            c.seed = cfg.seed.wrapping_add(1 + t as u64);
            snapshot_spectrum_with(tg, t, r, k_shift, kind, &c)
        })
        .collect::<Result<_, _>>()?;

    // conquer
    let q = assemble_q(&spectra, params)?;
    let spec = dense_sym_eig(&q.matrix)?;
    let top = spec.eigenvalues.len() - 1;
    let q_top_eigenvalue = spec.eigenvalues[top];
    let xq = &spec.eigenvectors[top];

    let mut lifted = vec![0.0; n * m];
    for (bt, s) in spectra.iter().enumerate() {
        for v in 0..n {
            let mut acc = 0.0;
            for j in 0..r {
                acc += s.basis[[v, j]] * xq[bt * r + j];
            }
            lifted[bt * n + v] = acc;
        }
    }
    crate::eigen::fix_sign(&mut lifted);

    let diagnostics = FstcDiagnostics {
        rank: r,
        lambda_tail_max: spectra.iter().filter_map(|s| s.tail_eigenvalue).fold(
            None,
            |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))),
        ),
        error_bound: fstc_error_bound(&spectra),
        q_top_eigenvalue,
        rank_too_small: r < 2,
    };
    let (cut, report) = sweep_round(&lifted, tg, params, kind)?;
    Ok((cut, report, diagnostics))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::{stc_relax, sweep_round};
    use crate::graph::{ShiftedLaplacian, SpectralOperator};
    use crate::oracle::partition_agreement;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_instance(seed: u64, n: usize, m: usize, p: f64) -> TemporalGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut snaps = Vec::new();
        for _ in 0..m {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(p) {
                        edges.push((u, v, rng.random_range(0.5..1.5)));
                    }
                }
            }
            if edges.is_empty() {
                edges.push((0, 1, 1.0));
            }
            snaps.push(edges);
        }
        TemporalGraph::new(n, snaps).unwrap()
    }

    fn shifted_block_dense(tg: &TemporalGraph, t: usize, k_shift: f64) -> Array2<f64> {
        let snap = tg.snapshot_graph(t);
        let params = MultiplexParams::uniform(0.0).unwrap();
        let view = MultiplexView::new(&snap, &params).unwrap();
        ShiftedLaplacian::new(k_shift, &view, false).to_dense()
    }

    #[test]
    fn p3_mapped_spectrum() {
        // L spectrum {0, 1, 3}; with K = 15, n = 3 the mapped block
        // spectrum is {0, 42, 44}.
        let tg = TemporalGraph::new(3, vec![vec![(0, 1, 1.0), (1, 2, 1.0)]]).unwrap();
        let s = snapshot_spectrum(&tg, 0, 3, 15.0, Objective::Sparsest).unwrap();
        let want = [44.0, 42.0, 0.0];
        for (got, w) in s.eigenvalues.iter().zip(want) {
            assert!((got - w).abs() < 1e-8, "{got} vs {w}");
        }
        assert!(s.tail_eigenvalue.is_none());

        // dense check of the explicit block
        let dense = shifted_block_dense(&tg, 0, 15.0);
        let spec = dense_sym_eig(&dense).unwrap();
        for (got, w) in spec.eigenvalues.iter().zip([0.0, 42.0, 44.0]) {
            assert!((got - w).abs() < 1e-10);
        }
        // basis columns are eigenvectors of the block
        for j in 0..3 {
            let col: Vec<f64> = (0..3).map(|v| s.basis[[v, j]]).collect();
            let op = crate::eigen::DenseOperator::new(dense.clone()).unwrap();
            let mv = op.matvec(&col);
            for v in 0..3 {
                assert!((mv[v] - s.eigenvalues[j] * col[v]).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn rank_one_keeps_only_constant() {
        let tg = TemporalGraph::new(3, vec![vec![(0, 1, 1.0), (1, 2, 1.0)]]).unwrap();
        let s = snapshot_spectrum(&tg, 0, 1, 15.0, Objective::Sparsest).unwrap();
        assert_eq!(s.eigenvalues, vec![0.0]);
        let c = 1.0 / 3f64.sqrt();
        for v in 0..3 {
            assert!((s.basis[[v, 0]] - c).abs() < 1e-12);
        }
        assert!((s.tail_eigenvalue.unwrap() - (45.0 - 1.0)).abs() < 1e-8);
    }

    #[test]
    fn disconnected_snapshot_second_null_direction() {
        // two components: the second zero Laplacian eigenvalue maps to K*n
        // with an eigenvector orthogonal to the constant
        let tg = TemporalGraph::new(4, vec![vec![(0, 1, 1.0), (2, 3, 1.0)]]).unwrap();
        let params = MultiplexParams::uniform(1.0).unwrap();
        let k = shift_constant(&tg, &params, Objective::Sparsest);
        let s = snapshot_spectrum(&tg, 0, 2, k, Objective::Sparsest).unwrap();
        assert!((s.eigenvalues[0] - k * 4.0).abs() < 1e-7);
        let dotc: f64 = (0..4).map(|v| s.basis[[v, 0]]).sum();
        assert!(dotc.abs() < 1e-8);
        let dense = shifted_block_dense(&tg, 0, k);
        let spec = dense_sym_eig(&dense).unwrap();
        assert!((spec.eigenvalues[3] - k * 4.0).abs() < 1e-10);
    }

    #[test]
    fn q_single_snapshot_is_lambda() {
        let tg = TemporalGraph::new(3, vec![vec![(0, 1, 1.0), (1, 2, 1.0)]]).unwrap();
        let params = MultiplexParams::uniform(1.0).unwrap();
        let s = snapshot_spectrum(&tg, 0, 3, 15.0, Objective::Sparsest).unwrap();
        let q = assemble_q(std::slice::from_ref(&s), &params).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { s.eigenvalues[i] } else { 0.0 };
                assert!((q.matrix[[i, j]] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn full_rank_similarity() {
        for seed in [1u64, 2, 3] {
            let tg = random_instance(seed, 6, 2, 0.6);
            let params = MultiplexParams::uniform(0.9).unwrap();
            let kind = Objective::Sparsest;
            let k = shift_constant(&tg, &params, kind);
            let spectra: Vec<_> = (0..2)
                .map(|t| snapshot_spectrum(&tg, t, 6, k, kind).unwrap())
                .collect();
            let q = assemble_q(&spectra, &params).unwrap();
            let qs = dense_sym_eig(&q.matrix).unwrap();

            let view = MultiplexView::new(&tg, &params).unwrap();
            let ms = ShiftedLaplacian::new(k, &view, false).to_dense();
            let mss = dense_sym_eig(&ms).unwrap();
            let scale = mss.eigenvalues.last().unwrap().abs().max(1.0);
            for (a, b) in qs.eigenvalues.iter().zip(&mss.eigenvalues) {
                assert!((a - b).abs() < 1e-8 * scale, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn full_rank_similarity_with_per_vertex_costs() {
        let tg = random_instance(7, 5, 3, 0.6);
        let mut rng = ChaCha8Rng::seed_from_u64(70);
        let costs =
            Array2::from_shape_fn((5, 2), |_| rng.random_range(0.1..2.0));
        let params = MultiplexParams::with_swap_costs(1.0, costs).unwrap();
        let kind = Objective::Sparsest;
        let k = shift_constant(&tg, &params, kind);
        let spectra: Vec<_> = (0..3)
            .map(|t| snapshot_spectrum(&tg, t, 5, k, kind).unwrap())
            .collect();
        let q = assemble_q(&spectra, &params).unwrap();
        let qs = dense_sym_eig(&q.matrix).unwrap();
        let view = MultiplexView::new(&tg, &params).unwrap();
        let ms = ShiftedLaplacian::new(k, &view, false).to_dense();
        let mss = dense_sym_eig(&ms).unwrap();
        let scale = mss.eigenvalues.last().unwrap().abs().max(1.0);
        for (a, b) in qs.eigenvalues.iter().zip(&mss.eigenvalues) {
            assert!((a - b).abs() < 1e-7 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn beta_zero_decouples() {
        let tg = random_instance(5, 5, 3, 0.5);
        let params = MultiplexParams::uniform(0.0).unwrap();
        let k = shift_constant(&tg, &params, Objective::Sparsest);
        let spectra: Vec<_> = (0..3)
            .map(|t| snapshot_spectrum(&tg, t, 5, k, Objective::Sparsest).unwrap())
            .collect();
        let q = assemble_q(&spectra, &params).unwrap();
        // off-diagonal blocks vanish
        for i in 0..15 {
            for j in 0..15 {
                if i / 5 != j / 5 {
                    assert_eq!(q.matrix[[i, j]], 0.0);
                }
            }
        }
        let qs = dense_sym_eig(&q.matrix).unwrap();
        let mut union: Vec<f64> = spectra.iter().flat_map(|s| s.eigenvalues.clone()).collect();
        union.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in qs.eigenvalues.iter().zip(&union) {
            assert!((a - b).abs() < 1e-7);
        }
    }

    #[test]
    fn full_rank_reproduces_stc_cut() {
        for seed in [11u64, 12, 13] {
            let tg = random_instance(seed, 6, 3, 0.55);
            let params = MultiplexParams::uniform(1.0).unwrap();
            let kind = Objective::Sparsest;
            let (v, lam) = stc_relax(&tg, &params, kind).unwrap();
            let (stc_cut, stc_rep) =
                sweep_round(v.as_slice().unwrap(), &tg, &params, kind).unwrap();
            let (fcut, frep, diag) = fstc_cut(&tg, &params, kind, 6).unwrap();
            assert!(
                (diag.q_top_eigenvalue - lam).abs() <= 1e-8 * lam.abs(),
                "seed {seed}: {} vs {}",
                diag.q_top_eigenvalue,
                lam
            );
            assert_eq!(diag.error_bound, 0.0);
            assert_eq!(partition_agreement(&fcut, &stc_cut).unwrap(), 1.0);
            assert!((frep.objective - stc_rep.objective).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_one_lift_has_no_feasible_prefix() {
        let tg = random_instance(21, 5, 2, 0.6);
        let params = MultiplexParams::uniform(1.0).unwrap();
        let err = fstc_cut(&tg, &params, Objective::Sparsest, 1).unwrap_err();
        assert!(matches!(err, FstcError::Cut(CutError::NoFeasiblePrefix)));
    }

    #[test]
    fn error_bound_holds_against_dense_oracle() {
        for seed in [31u64, 32, 33, 34] {
            let tg = random_instance(seed, 6, 3, 0.6);
            let params = MultiplexParams::uniform(0.8).unwrap();
            let kind = Objective::Sparsest;
            let k = shift_constant(&tg, &params, kind);
            let view = MultiplexView::new(&tg, &params).unwrap();
            let ms = ShiftedLaplacian::new(k, &view, false).to_dense();
            let top_exact = *dense_sym_eig(&ms).unwrap().eigenvalues.last().unwrap();
            for r in [2usize, 3] {
                let spectra: Vec<_> = (0..3)
                    .map(|t| snapshot_spectrum(&tg, t, r, k, kind).unwrap())
                    .collect();
                let bound = fstc_error_bound(&spectra);
                let q = assemble_q(&spectra, &params).unwrap();
                let top_q = *dense_sym_eig(&q.matrix).unwrap().eigenvalues.last().unwrap();
                assert!(
                    (top_q - top_exact).abs() <= bound + 1e-8,
                    "seed {seed} r {r}: |{top_q} - {top_exact}| > {bound}"
                );
            }
        }
    }

    #[test]
    fn q_top_eigenvalue_monotone_in_rank() {
        let tg = random_instance(41, 7, 2, 0.6);
        let params = MultiplexParams::uniform(1.0).unwrap();
        let kind = Objective::Sparsest;
        let k = shift_constant(&tg, &params, kind);
        let mut prev = f64::NEG_INFINITY;
        for r in 2..=7 {
            let spectra: Vec<_> = (0..2)
                .map(|t| snapshot_spectrum(&tg, t, r, k, kind).unwrap())
                .collect();
            let q = assemble_q(&spectra, &params).unwrap();
            let top = *dense_sym_eig(&q.matrix).unwrap().eigenvalues.last().unwrap();
            assert!(top >= prev - 1e-8, "rank {r}: {top} < {prev}");
            prev = top;
        }
    }

    #[test]
    fn lifted_vector_rayleigh_at_full_rank() {
        let tg = random_instance(51, 5, 3, 0.6);
        let params = MultiplexParams::uniform(0.7).unwrap();
        let kind = Objective::Sparsest;
        let k = shift_constant(&tg, &params, kind);
        let spectra: Vec<_> = (0..3)
            .map(|t| snapshot_spectrum(&tg, t, 5, k, kind).unwrap())
            .collect();
        let q = assemble_q(&spectra, &params).unwrap();
        let qs = dense_sym_eig(&q.matrix).unwrap();
        let top = qs.eigenvalues.len() - 1;
        let xq = &qs.eigenvectors[top];
        let mut lifted = vec![0.0; 15];
        for (bt, s) in spectra.iter().enumerate() {
            for v in 0..5 {
                lifted[bt * 5 + v] =
                    (0..5).map(|j| s.basis[[v, j]] * xq[bt * 5 + j]).sum();
            }
        }
        let view = MultiplexView::new(&tg, &params).unwrap();
        let op = ShiftedLaplacian::new(k, &view, false);
        let mx = op.matvec(&lifted);
        let num: f64 = lifted.iter().zip(&mx).map(|(a, b)| a * b).sum();
        let den: f64 = lifted.iter().map(|a| a * a).sum();
        assert!(
            (num / den - qs.eigenvalues[top]).abs() <= 1e-8 * qs.eigenvalues[top].abs(),
            "{} vs {}",
            num / den,
            qs.eigenvalues[top]
        );
    }

    #[test]
    fn normalized_kind_runs_and_rounds() {
        let tg = random_instance(61, 6, 2, 0.7);
        let params = MultiplexParams::uniform(0.5).unwrap();
        let (cut, rep, diag) = fstc_cut(&tg, &params, Objective::Normalized, 6).unwrap();
        assert_eq!(cut.k(), 2);
        assert!(rep.objective.is_finite());
        assert!(!diag.rank_too_small);
    }
}
