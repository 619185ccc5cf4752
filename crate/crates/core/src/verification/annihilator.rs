//! Jacobi annihilators and operators on vectorized off-diagonals, and a power
//! iteration for their spectral norms.
//!
//! The annihilator of pivot `(p, q)` and rotation `R` is the linear map
//! `vec(X) -> vec(N_pq(R* X R))` on off-diagonal parts, where `N_pq` zeroes
//! the two pivot positions. It is built column by column by probing the
//! defining rule with Hermitian basis perturbations.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{offdiag_index, ComplexMatrix};
use crate::pivot::PivotOrdering;
use crate::rng::SeededRng;
use crate::transforms::{apply_rotation, Rotation};

const POWER_BUDGET: usize = 10_000;
const POWER_STALL: f64 = 1e-12;
const POWER_SEED: u64 = 0x5eed;

#[derive(Clone, Debug)]
pub struct JacobiAnnihilator {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    /// `2N x 2N`, acting on [`ComplexMatrix::vec_offdiag`] vectors.
    pub matrix: ComplexMatrix,
}

fn defining_rule(n: usize, rotation: &Rotation, x: &ComplexMatrix) -> Result<Vec<Complex64>> {
    debug_assert_eq!(x.n(), n);
    let mut v = apply_rotation(x, rotation)?.vec_offdiag();
    v[offdiag_index(rotation.p, rotation.q)] = Complex64::new(0.0, 0.0);
    v[offdiag_index(rotation.q, rotation.p)] = Complex64::new(0.0, 0.0);
    Ok(v)
}

pub fn jacobi_annihilator(n: usize, p: usize, q: usize, rotation: &Rotation) -> Result<JacobiAnnihilator> {
    if p >= q || q >= n {
        return Err(Error::IndexOutOfRange { p, q, n });
    }
    if rotation.p != p || rotation.q != q {
        return Err(Error::OperatorMismatch(format!(
            "rotation acts on ({}, {}), annihilator requested for ({}, {})",
            rotation.p + 1,
            rotation.q + 1,
            p + 1,
            q + 1
        )));
    }
    if !rotation.within_quarter_turn() {
        return Err(Error::AngleOutOfRange {
            cos_phi: rotation.cos_phi,
            sin_phi: rotation.sin_phi,
        });
    }
    let dim = n * (n - 1);
    let mut matrix = ComplexMatrix::zeros(dim);
    let one = Complex64::new(1.0, 0.0);
    let i_unit = Complex64::new(0.0, 1.0);
    for j in 1..n {
        for i in 0..j {
            // H1 = E_ij + E_ji, H2 = i(E_ij - E_ji)
            let mut h1 = ComplexMatrix::zeros(n);
            h1[(i, j)] = one;
            h1[(j, i)] = one;
            let mut h2 = ComplexMatrix::zeros(n);
            h2[(i, j)] = i_unit;
            h2[(j, i)] = -i_unit;
            let f1 = defining_rule(n, rotation, &h1)?;
            let f2 = defining_rule(n, rotation, &h2)?;
            let (col_ij, col_ji) = (offdiag_index(i, j), offdiag_index(j, i));
            for row in 0..dim {
                // f(E_ij) = (f(H1) - i f(H2)) / 2, f(E_ji) = (f(H1) + i f(H2)) / 2
                matrix[(row, col_ij)] = (f1[row] - i_unit * f2[row]) * 0.5;
                matrix[(row, col_ji)] = (f1[row] + i_unit * f2[row]) * 0.5;
            }
        }
    }
    Ok(JacobiAnnihilator { n, p, q, matrix })
}

/// `R_{N-1} ... R_1 R_0` for the annihilators of one sweep.
pub fn jacobi_operator(ordering: &PivotOrdering, rotations: &[Rotation]) -> Result<ComplexMatrix> {
    let n = ordering.n();
    if rotations.len() != ordering.len() {
        return Err(Error::OperatorMismatch(format!(
            "{} rotations for an ordering of {} pairs",
            rotations.len(),
            ordering.len()
        )));
    }
    let mut op = ComplexMatrix::identity(n * (n - 1));
    for (k, (&(p, q), rot)) in ordering.pairs().iter().zip(rotations).enumerate() {
        if (rot.p, rot.q) != (p, q) {
            return Err(Error::OperatorMismatch(format!(
                "rotation {} acts on ({}, {}), ordering has ({}, {})",
                k + 1,
                rot.p + 1,
                rot.q + 1,
                p + 1,
                q + 1
            )));
        }
        op = jacobi_annihilator(n, p, q, rot)?.matrix.matmul(&op);
    }
    Ok(op)
}

const SQUARINGS: usize = 30;

fn mat_vec(m: &ComplexMatrix, v: &[Complex64]) -> Vec<Complex64> {
    (0..m.n()).map(|i| m.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value by power iteration from a seeded start.
///
/// The iteration runs on `G = (M*M)^(2^30)`, built by normalized repeated
/// squaring: Jacobi operators often have two leading singular values within
/// `1e-7` of each other, which plain power iteration on `M*M` cannot separate
/// in its budget. The estimate is `‖Mv‖` for the current unit vector `v`, and
/// iteration stops when its square changes by less than `1e-12` relative.
pub fn spectral_norm(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_finite() {
        return Err(Error::NonFinite { step: 0 });
    }
    let n = m.n();
    let mut g = m.adjoint().matmul(m);
    for _ in 0..SQUARINGS {
        let scale = g.frobenius_norm();
        if scale == 0.0 {
            return Ok(0.0);
        }
        let h = g.scale(Complex64::new(1.0 / scale, 0.0));
        g = h.matmul(&h);
    }
    let mut rng = SeededRng::new(POWER_SEED);
    let mut v: Vec<Complex64> = (0..n).map(|_| rng.complex()).collect();
    let mut prev = 0.0;
    for _ in 0..POWER_BUDGET {
        let nv = norm(&v);
        if nv == 0.0 {
            return Ok(0.0);
        }
        v.iter_mut().for_each(|z| *z /= nv);
        let rayleigh = mat_vec(m, &v).iter().map(|z| z.norm_sqr()).sum::<f64>();
        if rayleigh == 0.0 && g.frobenius_norm() == 0.0 {
            return Ok(0.0);
        }
        if (rayleigh - prev).abs() <= POWER_STALL * rayleigh {
            return Ok(rayleigh.sqrt());
        }
        prev = rayleigh;
        v = mat_vec(&g, &v);
    }
    Err(Error::SpectralNormNotConverged {
        iterations: POWER_BUDGET,
        estimate: prev.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verification::random_unitary;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_4;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn svd_norm(m: &ComplexMatrix) -> f64 {
        let n = m.n();
        let dm = nalgebra::DMatrix::from_fn(n, n, |i, j| {
            let z = m[(i, j)];
            nalgebra::Complex::new(z.re, z.im)
        });
        dm.singular_values().max()
    }

    #[test]
    fn two_by_two_annihilator_is_zero() {
        let r = Rotation::from_angles(0, 1, 0.7, 0.3);
        let a = jacobi_annihilator(2, 0, 1, &r).unwrap();
        assert!(a.matrix.as_slice().iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn identity_rotation_is_projection() {
        let a = jacobi_annihilator(3, 0, 2, &Rotation::identity(0, 2)).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let zeroed = i == offdiag_index(0, 2) || i == offdiag_index(2, 0);
                let expected = if i == j && !zeroed { 1.0 } else { 0.0 };
                assert_eq!(a.matrix[(i, j)], c(expected, 0.0));
            }
        }
    }

    #[test]
    fn annihilator_norm_is_one() {
        for n in 3..=5 {
            let r = Rotation::from_angles(1, n - 1, 1.1, -0.6);
            let a = jacobi_annihilator(n, 1, n - 1, &r).unwrap();
            assert_relative_eq!(spectral_norm(&a.matrix).unwrap(), 1.0, epsilon = 1e-10);
            assert_relative_eq!(svd_norm(&a.matrix), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn annihilator_rejects_bad_input() {
        let wide = Rotation::from_angles(0, 1, 0.0, 1.0);
        assert!(matches!(jacobi_annihilator(3, 0, 1, &wide), Err(Error::AngleOutOfRange { .. })));
        let r = Rotation::from_angles(0, 1, 0.0, 0.1);
        assert!(matches!(jacobi_annihilator(3, 0, 2, &r), Err(Error::OperatorMismatch(_))));
        let o = PivotOrdering::column(3).unwrap();
        assert!(jacobi_operator(&o, &[r]).is_err());
    }

    #[test]
    fn operator_with_identity_rotations_is_zero() {
        let o = PivotOrdering::row(4).unwrap();
        let rots: Vec<Rotation> = o.pairs().iter().map(|&(p, q)| Rotation::identity(p, q)).collect();
        let op = jacobi_operator(&o, &rots).unwrap();
        assert!(op.as_slice().iter().all(|z| *z == c(0.0, 0.0)));
        let o2 = PivotOrdering::column(2).unwrap();
        let op = jacobi_operator(&o2, &[Rotation::from_angles(0, 1, 0.2, FRAC_PI_4)]).unwrap();
        assert!(op.frobenius_norm() < 1e-15);
    }

    #[test]
    fn spectral_norm_examples() {
        assert_eq!(spectral_norm(&ComplexMatrix::zeros(3)).unwrap(), 0.0);
        let d = ComplexMatrix::from_diag(&[c(3.0, 0.0), c(1.0, 0.0)]);
        assert_relative_eq!(spectral_norm(&d).unwrap(), 3.0, epsilon = 1e-8);
        let q = random_unitary(6, 3).unwrap();
        assert_relative_eq!(spectral_norm(&q).unwrap(), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn spectral_norm_matches_svd() {
        let mut rng = SeededRng::new(8);
        for n in [2, 5, 12] {
            let m = ComplexMatrix::from_fn(n, |_, _| rng.complex());
            let est = spectral_norm(&m).unwrap();
            assert!((est - svd_norm(&m)).abs() <= 1e-8 * svd_norm(&m));
        }
    }
}
