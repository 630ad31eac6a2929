//! Solvers for sparsest and normalized cuts on temporal graphs.
//!
//! A temporal graph is a sequence of weighted undirected snapshots over a
//! fixed vertex set. A temporal cut assigns every vertex a side per snapshot;
//! its cost combines per-snapshot cut weights with a swap penalty for
//! vertices that change sides between consecutive snapshots. Both the
//! size-balanced (sparsest) and volume-balanced (normalized) ratio objectives
//! are supported.
//!
//! The crate provides:
//!
//! - [`graph`]: the temporal graph data model, its multiplex view, and
//!   matrix-free operators for every matrix the solvers need.
//! - [`eigen`]: a Lanczos-style extreme-eigenpair solver for implicit
//!   operators, a dense symmetric eigensolver, a projected conjugate-gradient
//!   solver, and a generalized eigensolver.
//! - [`cuts`]: the temporal cut objectives, the exact spectral methods
//!   (`stc_relax` / `clc_relax`), sweep rounding, and a k-way extension.
//! - [`fstc`]: the fast divide-and-conquer approximation built from
//!   per-snapshot low-rank spectra assembled into a small block-tridiagonal
//!   matrix.
//! - [`baselines`]: the SINGLE / UNION / LAP comparison methods.
//! - [`wavelets`]: dynamic graph wavelets for signal compression, the
//!   Graph Fourier baseline, and a heat-equation signal generator.
//! - [`synth`]: a planted moving-partition benchmark generator.
//! - [`oracle`]: brute-force ground truth for small instances plus
//!   evaluation metrics.

pub mod baselines;
pub mod cuts;
pub mod eigen;
pub mod fstc;
pub mod graph;
pub mod oracle;
pub mod synth;
pub mod wavelets;

pub use cuts::{CutReport, Objective, TemporalCut};
pub use graph::{MultiplexParams, MultiplexView, SpectralOperator, TemporalGraph};
