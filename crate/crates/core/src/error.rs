use num_complex::Complex64;
use thiserror::Error;

use crate::pivot::OrderingViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be square with n >= {min}, got {rows}x{cols}")]
    Shape { rows: usize, cols: usize, min: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("pivot ({p}, {q}) out of range for n = {n}")]
    IndexOutOfRange { p: usize, q: usize, n: usize },

    #[error("non-finite entry in iterate after step {step}")]
    NonFinite { step: usize },

    #[error("pivot block ({p}, {q}) is not Hermitian (deviation {deviation:e})")]
    NotHermitian { p: usize, q: usize, deviation: f64 },

    #[error("degenerate shear at pivot ({p}, {q}): {reason}")]
    DegenerateShear { p: usize, q: usize, reason: String },

    #[error("real mode requires a real matrix; entry ({row}, {col}) has imaginary part {imag:e}")]
    NotReal { row: usize, col: usize, imag: f64 },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("transposition at position {position} swaps pairs sharing an index: {first:?} and {second:?}")]
    NotAdmissible {
        position: usize,
        first: (usize, usize),
        second: (usize, usize),
    },

    #[error("shift length {len} exceeds ordering length {total}")]
    ShiftTooLong { len: usize, total: usize },

    #[error("invalid pivot ordering: {0}")]
    InvalidOrdering(OrderingViolation),

    #[error("rotation angle violates |phi| <= pi/4 (cos = {cos_phi}, sin = {sin_phi})")]
    AngleOutOfRange { cos_phi: f64, sin_phi: f64 },

    #[error("rotations do not match the ordering: {0}")]
    OperatorMismatch(String),

    #[error("characteristic polynomial oracle supports n <= {max}, got {n}")]
    OracleTooLarge { n: usize, max: usize },

    #[error("polynomial root iteration did not converge after {sweeps} sweeps")]
    RootsNotConverged {
        sweeps: usize,
        partial: Vec<Complex64>,
    },

    #[error("power iteration did not converge after {iterations} iterations (estimate {estimate})")]
    SpectralNormNotConverged { iterations: usize, estimate: f64 },

    #[error("random unitary construction failed after {attempts} attempts")]
    DegenerateRandomMatrix { attempts: usize },

    #[error("diagonal real parts are not in decreasing order at index {index}")]
    UnsortedDiagonal { index: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
