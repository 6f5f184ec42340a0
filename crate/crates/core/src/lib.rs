//! Straggler-resilient distributed clustering via redundant data assignment.
//!
//! In a coordinator/worker setup, straggling workers silently drop their share
//! of the data and ruin clustering quality. This crate mitigates that by
//! assigning every point to several workers through a random binary assignment
//! matrix. When a subset of workers survives, a nonnegative *recovery vector*
//! reweights their local results so that every point's total contribution
//! lands in `[1, 1 + delta]`, which keeps global cost estimates sandwiched
//! within `(1 + delta)` of the truth.
//!
//! The crate provides:
//!
//! * [`data`] — datasets, k-median/k-means costs, subspace residual costs;
//! * [`assignment`] — assignment matrices, recovery vectors, and the
//!   resilience property with its randomized construction bound;
//! * [`solvers`] — weighted k-median (exact oracle and Weiszfeld-refined
//!   heuristic), one-sided Jacobi SVD, r-PCA, and k-subspace clustering;
//! * [`coresets`] — identity/sampled coresets, relaxed SVD coresets with
//!   spectral-tail corrections, and recovery-weighted merging;
//! * [`pipeline`] — the in-process coordinator/worker simulation running the
//!   three distributed algorithms end to end under a straggler model;
//! * [`experiment`] — the multi-condition benchmark runner;
//! * [`verify`] — executable checks for every approximation guarantee.

pub mod assignment;
pub mod coresets;
pub mod data;
mod error;
pub mod experiment;
pub mod io;
pub mod linalg;
pub mod pipeline;
pub mod seeds;
pub mod solvers;
pub mod synth;
pub mod verify;

pub use error::{Error, Result};
