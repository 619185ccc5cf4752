//! Norm-reducing Jacobi-type diagonalization of arbitrary complex and real
//! square matrices (Eberlein's method) under cyclic pivot strategies, with a
//! verification layer of independent oracles and bound checkers.
//!
//! Indices are 0-based throughout the Rust API. Every text format (orderings,
//! provenance logs, traces, summaries) uses 1-based indices.

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod matrix;
pub mod pivot;
pub mod rng;
pub mod solver;
pub mod transforms;
pub mod verification;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
pub use pivot::{PivotCursor, PivotOrdering, SerialFamily};
pub use solver::{run, SolverOptions, SolverResult, SolverState};
pub use transforms::{Mode, Rotation, Shear, ShearWorkspace};
