//! Oracles and bound checkers that are independent of the iteration itself.

mod annihilator;
mod generators;
mod poly;
mod residual;

pub use annihilator::{jacobi_annihilator, jacobi_operator, spectral_norm, JacobiAnnihilator};
pub use generators::{
    known_spectrum_matrix, random_complex, random_hermitian, random_normal, random_real, random_unitary,
};
pub use poly::{char_poly, matching_distance, poly_roots, PolyCoefficients, ORACLE_MAX_N};
pub use residual::{residual_report, ResidualReport};
