//! Seeded test matrices, including matrices with a prescribed spectrum built
//! as `A = Q* T Q` with `T` upper triangular and `Q` unitary.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::rng::SeededRng;

const UNITARY_ATTEMPTS: usize = 5;
const UNITARY_TOL: f64 = 1e-13;

/// Entries with real and imaginary parts uniform on `[-1, 1)`.
pub fn random_complex(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = SeededRng::new(seed);
    ComplexMatrix::from_fn(n, |_, _| rng.complex())
}

/// Entries uniform on `[-1, 1)`, imaginary parts exactly zero.
pub fn random_real(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = SeededRng::new(seed);
    ComplexMatrix::from_fn(n, |_, _| Complex64::new(rng.symmetric(), 0.0))
}

pub fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
    let mut h = random_complex(n, seed).hermitian_part();
    for i in 0..n {
        // exact zero, not rounding residue
        h[(i, i)].im = 0.0;
    }
    h
}

/// `Q* D Q` with a random complex diagonal `D`; returns the matrix and `D`.
pub fn random_normal(n: usize, seed: u64) -> Result<(ComplexMatrix, Vec<Complex64>)> {
    let mut rng = SeededRng::new(seed ^ 0x9e37_79b9_7f4a_7c15);
    let diag: Vec<Complex64> = (0..n).map(|_| rng.complex() * 2.0).collect();
    known_spectrum_matrix(&diag, 0.0, seed)
}

/// Modified Gram-Schmidt over the columns, run twice.
fn orthonormalize(x: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = x.n();
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..n).map(|i| x[(i, j)]).collect()).collect();
    for _pass in 0..2 {
        for j in 0..n {
            for k in 0..j {
                let dot: Complex64 = cols[k].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
                let (done, rest) = cols.split_at_mut(j);
                for (v, u) in rest[0].iter_mut().zip(&done[k]) {
                    *v -= dot * u;
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm.is_nan() || norm <= 1e-8 {
                return None;
            }
            for v in cols[j].iter_mut() {
                *v /= norm;
            }
        }
    }
    Some(ComplexMatrix::from_fn(n, |i, j| cols[j][i]))
}

fn unitary_from(rng: &mut SeededRng, n: usize) -> Result<ComplexMatrix> {
    for _ in 0..UNITARY_ATTEMPTS {
        let x = ComplexMatrix::from_fn(n, |_, _| rng.complex());
        if let Some(q) = orthonormalize(&x) {
            let defect = q.adjoint().matmul(&q).sub(&ComplexMatrix::identity(n)).frobenius_norm();
            if defect <= UNITARY_TOL {
                return Ok(q);
            }
        }
    }
    Err(Error::DegenerateRandomMatrix {
        attempts: UNITARY_ATTEMPTS,
    })
}

/// Random unitary matrix with `‖Q*Q - I‖_F <= 1e-13`.
pub fn random_unitary(n: usize, seed: u64) -> Result<ComplexMatrix> {
    unitary_from(&mut SeededRng::new(seed), n)
}

/// `A = Q* T Q` where `T` is upper triangular with diagonal `diag_t` and
/// strict upper part drawn uniformly and scaled by `upper_scale`.
///
/// Couplings `t_ij` between equal diagonal values are set to zero, so a run
/// of equal consecutive values stays diagonalizable instead of forming a
/// Jordan block. `upper_scale = 0` gives a normal matrix.
pub fn known_spectrum_matrix(
    diag_t: &[Complex64],
    upper_scale: f64,
    seed: u64,
) -> Result<(ComplexMatrix, Vec<Complex64>)> {
    let n = diag_t.len();
    if n == 0 {
        return Err(Error::Shape { rows: 0, cols: 0, min: 1 });
    }
    if !(upper_scale >= 0.0 && upper_scale.is_finite()) {
        return Err(Error::Config(format!("upper_scale must be nonnegative, got {upper_scale}")));
    }
    let mut rng = SeededRng::new(seed);
    let t = ComplexMatrix::from_fn(n, |i, j| {
        if i == j {
            diag_t[i]
        } else if i < j {
            let z = rng.complex() * upper_scale;
            if diag_t[i] == diag_t[j] {
                Complex64::new(0.0, 0.0)
            } else {
                z
            }
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let q = unitary_from(&mut rng, n)?;
    Ok((q.adjoint().matmul(&t).matmul(&q), diag_t.to_vec()))
}
