//! Eigenvalues through the characteristic polynomial: Faddeev-LeVerrier for
//! the coefficients, Durand-Kerner for the roots. Deliberately unrelated to
//! the Jacobi-type iteration, and only trusted for small `n`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

pub const ORACLE_MAX_N: usize = 8;

const ROOT_SWEEPS: usize = 1000;
const ROOT_MOVEMENT: f64 = 1e-13;

/// Monic polynomial, highest degree first: `coeffs[0] = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyCoefficients {
    pub coeffs: Vec<Complex64>,
}

impl PolyCoefficients {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Rounding-level bound on `|p(z)|` for Horner evaluation.
    fn eval_noise(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let magnitude = self.coeffs.iter().fold(0.0, |acc, c| acc * r + c.norm());
        8.0 * self.coeffs.len() as f64 * f64::EPSILON * magnitude
    }
}

/// Characteristic polynomial `det(λI - A)` for `n <= 8`.
pub fn char_poly(a: &ComplexMatrix) -> Result<PolyCoefficients> {
    let n = a.n();
    if n > ORACLE_MAX_N {
        return Err(Error::OracleTooLarge { n, max: ORACLE_MAX_N });
    }
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    let mut m = ComplexMatrix::identity(n);
    for k in 1..=n {
        let am = a.matmul(&m);
        let c = -am.trace() / k as f64;
        coeffs.push(c);
        m = am;
        for i in 0..n {
            m[(i, i)] += c;
        }
    }
    Ok(PolyCoefficients { coeffs })
}

/// All roots of a monic polynomial by Durand-Kerner iteration.
///
/// Starts from `r exp(i(2πk/n + 0.4))` with `r = 1 + max|coeff|` and stops
/// once no root moves by more than `1e-13`, or once every residual is at
/// rounding level (multiple roots are only found to `ε^(1/m)` and keep
/// wandering in that noise).
pub fn poly_roots(p: &PolyCoefficients) -> Result<Vec<Complex64>> {
    let n = p.coeffs.len().saturating_sub(1);
    if n == 0 || p.coeffs[0] != Complex64::new(1.0, 0.0) {
        return Err(Error::Config("poly_roots needs a monic polynomial of degree >= 1".into()));
    }
    if n == 1 {
        return Ok(vec![-p.coeffs[1]]);
    }
    let r = 1.0 + p.max_abs_coeff();
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r, TAU * k as f64 / n as f64 + 0.4))
        .collect();

    for _ in 0..ROOT_SWEEPS {
        let mut movement: f64 = 0.0;
        for k in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != k {
                    denom *= z[k] - z[j];
                }
            }
            let value = p.eval(z[k]);
            if value == Complex64::new(0.0, 0.0) || denom == Complex64::new(0.0, 0.0) {
                continue;
            }
            let step = value / denom;
            z[k] -= step;
            movement = movement.max(step.norm());
        }
        if movement < ROOT_MOVEMENT || z.iter().all(|&zk| p.eval(zk).norm() <= p.eval_noise(zk)) {
            return Ok(z);
        }
    }
    let tolerance = 1e-10 * (1.0 + p.max_abs_coeff());
    if z.iter().all(|&zk| p.eval(zk).norm() <= tolerance) {
        return Ok(z);
    }
    Err(Error::RootsNotConverged {
        sweeps: ROOT_SWEEPS,
        partial: z,
    })
}

/// Smallest `d` such that the two multisets can be paired with every pair
/// within distance `d`; infinite when the sizes differ.
pub fn matching_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    if a.is_empty() {
        return 0.0;
    }
    let dist: Vec<Vec<f64>> = a.iter().map(|x| b.iter().map(|y| (x - y).norm()).collect()).collect();
    let mut candidates: Vec<f64> = dist.iter().flatten().copied().collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    // bottleneck assignment: binary search on the threshold
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching(&dist, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

fn perfect_matching(dist: &[Vec<f64>], limit: f64) -> bool {
    let n = dist.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    fn augment(i: usize, dist: &[Vec<f64>], limit: f64, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for j in 0..dist.len() {
            if dist[i][j] <= limit && !seen[j] {
                seen[j] = true;
                if owner[j].is_none_or(|o| augment(o, dist, limit, seen, owner)) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    (0..n).all(|i| augment(i, dist, limit, &mut vec![false; n], &mut owner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;
    use crate::verification::random_unitary;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_poly(coeffs: &[f64]) -> PolyCoefficients {
        PolyCoefficients {
            coeffs: coeffs.iter().map(|&x| c(x, 0.0)).collect(),
        }
    }

    #[test]
    fn char_poly_examples() {
        let d = ComplexMatrix::from_diag(&[c(2.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(char_poly(&d).unwrap(), real_poly(&[1.0, -5.0, 6.0]));
        let nil = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(char_poly(&nil).unwrap(), real_poly(&[1.0, 0.0, 0.0]));
        assert_eq!(
            char_poly(&ComplexMatrix::identity(3)).unwrap(),
            real_poly(&[1.0, -3.0, 3.0, -1.0])
        );
        assert!(matches!(
            char_poly(&ComplexMatrix::identity(9)),
            Err(Error::OracleTooLarge { n: 9, max: 8 })
        ));
    }

    #[test]
    fn trace_coefficient() {
        let mut rng = SeededRng::new(12);
        for n in 1..=8 {
            let a = ComplexMatrix::from_fn(n, |_, _| rng.complex());
            let p = char_poly(&a).unwrap();
            let tr = a.trace();
            assert!((p.coeffs[1] + tr).norm() <= 1e-10 * tr.norm().max(1.0));
        }
    }

    #[test]
    fn root_examples() {
        let mut roots = poly_roots(&real_poly(&[1.0, -5.0, 6.0])).unwrap();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((roots[0] - c(2.0, 0.0)).norm() < 1e-12);
        assert!((roots[1] - c(3.0, 0.0)).norm() < 1e-12);

        let roots = poly_roots(&real_poly(&[1.0, 0.0, 1.0])).unwrap();
        assert!(matching_distance(&roots, &[c(0.0, 1.0), c(0.0, -1.0)]) < 1e-12);

        let roots = poly_roots(&real_poly(&[1.0, 0.0, 0.0])).unwrap();
        assert!(roots.iter().all(|z| z.norm() < 1e-6));
    }

    #[test]
    fn residuals_are_small() {
        let mut rng = SeededRng::new(5);
        for n in 1..=8 {
            let p = PolyCoefficients {
                coeffs: std::iter::once(c(1.0, 0.0)).chain((0..n).map(|_| rng.complex() * 3.0)).collect(),
            };
            let roots = poly_roots(&p).unwrap();
            assert_eq!(roots.len(), n);
            let tol = 1e-10 * (1.0 + p.max_abs_coeff());
            assert!(roots.iter().all(|&z| p.eval(z).norm() <= tol));
        }
    }

    #[test]
    fn matching_distance_is_bottleneck() {
        let a = [c(0.0, 0.0), c(1.0, 0.0)];
        let b = [c(1.1, 0.0), c(0.0, 0.2)];
        assert!((matching_distance(&a, &b) - 0.2).abs() < 1e-15);
        assert_eq!(matching_distance(&a, &b[..1]), f64::INFINITY);
        assert_eq!(matching_distance(&[], &[]), 0.0);
    }

    #[test]
    fn oracle_invariant_under_unitary_similarity() {
        let mut rng = SeededRng::new(31);
        for (seed, n) in (0..6).zip([3, 4, 5, 6, 7, 8]) {
            let a = ComplexMatrix::from_fn(n, |_, _| rng.complex());
            let q = random_unitary(n, 100 + seed).unwrap();
            let b = q.adjoint().matmul(&a).matmul(&q);
            let ea = poly_roots(&char_poly(&a).unwrap()).unwrap();
            let eb = poly_roots(&char_poly(&b).unwrap()).unwrap();
            assert!(matching_distance(&ea, &eb) < 1e-8);
        }
    }
}
