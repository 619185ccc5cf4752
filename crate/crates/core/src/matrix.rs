//! Dense complex square matrices and the scalar functionals used throughout
//! the solver: Frobenius norm, off-norm, Hermitian/skew-Hermitian split,
//! the commutator `C(A) = AA* - A*A` and the off-diagonal vectorization.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense `n x n` complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from rows; every row must have the same length as the
    /// number of rows and no entry may be NaN or infinite.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Shape {
                rows: 0,
                cols: 0,
                min: 1,
            });
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Shape {
                    rows: n,
                    cols: row.len(),
                    min: 1,
                });
            }
            data.extend(row);
        }
        let m = Self { n, data };
        if let Some((row, col)) = m.first_non_finite() {
            return Err(Error::Parse {
                line: row + 1,
                column: col + 1,
                message: "non-finite entry".into(),
            });
        }
        Ok(m)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn diag(&self) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "matmul dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let rrow = &rhs.data[k * n..(k + 1) * n];
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        Self {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// Principal submatrix on the index range `start..end`.
    pub fn submatrix(&self, start: usize, end: usize) -> Self {
        Self::from_fn(end - start, |i, j| self[(start + i, start + j)])
    }

    /// True when every imaginary part compares equal to zero.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn first_non_real(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(|z| z.im != 0.0)
            .map(|idx| (idx / self.n, idx % self.n))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn first_non_finite(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
            .map(|idx| (idx / self.n, idx % self.n))
    }

    /// Sum of squared moduli of all entries.
    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sq().sqrt()
    }

    pub fn off_norm_sq(&self) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += self.data[i * n + j].norm_sqr();
                }
            }
        }
        s
    }

    /// Frobenius norm of the strictly off-diagonal part.
    pub fn off_norm(&self) -> f64 {
        self.off_norm_sq().sqrt()
    }

    /// Hermitian part `(A + A*)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.n, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Returns `(B, Z)` with `B = (A + A*)/2` Hermitian and `Z = (A - A*)/2`
    /// skew-Hermitian.
    pub fn split_hermitian(&self) -> (Self, Self) {
        let b = self.hermitian_part();
        let z = Self::from_fn(self.n, |i, j| (self[(i, j)] - self[(j, i)].conj()) * 0.5);
        (b, z)
    }

    /// `C(A) = AA* - A*A`; zero exactly when `A` is normal.
    pub fn commutator(&self) -> Self {
        let adj = self.adjoint();
        self.matmul(&adj).sub(&adj.matmul(self))
    }

    /// Off-diagonal entries in the library-wide enumeration, see
    /// [`offdiag_index`].
    pub fn vec_offdiag(&self) -> Vec<Complex64> {
        let n = self.n;
        let mut v = Vec::with_capacity(n * (n - 1));
        for j in 1..n {
            for i in 0..j {
                v.push(self[(i, j)]);
                v.push(self[(j, i)]);
            }
        }
        v
    }

    /// Inverse of [`vec_offdiag`](Self::vec_offdiag): a matrix with the given
    /// off-diagonal entries and the supplied diagonal.
    pub fn scatter_offdiag(v: &[Complex64], diag: &[Complex64]) -> Result<Self> {
        let n = diag.len();
        if v.len() != n * n.saturating_sub(1) {
            return Err(Error::DimensionMismatch {
                expected: n * n.saturating_sub(1),
                found: v.len(),
            });
        }
        let mut m = Self::from_diag(diag);
        for j in 1..n {
            for i in 0..j {
                m[(i, j)] = v[offdiag_index(i, j)];
                m[(j, i)] = v[offdiag_index(j, i)];
            }
        }
        Ok(m)
    }

    /// Largest entrywise deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

/// Position of entry `(i, j)`, `i != j`, in [`ComplexMatrix::vec_offdiag`].
///
/// The strict upper triangle is walked column by column; the pair `(i, j)`,
/// `i < j`, with running index `m` occupies slot `2m` and its mirror `(j, i)`
/// slot `2m + 1`.
pub fn offdiag_index(i: usize, j: usize) -> usize {
    assert!(i != j, "diagonal entries have no off-diagonal slot");
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let m = hi * (hi - 1) / 2 + lo;
    if i < j {
        2 * m
    } else {
        2 * m + 1
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn brute_sum_sq(m: &ComplexMatrix, offdiag_only: bool) -> f64 {
        let mut s = 0.0;
        for i in 0..m.n() {
            for j in 0..m.n() {
                if offdiag_only && i == j {
                    continue;
                }
                let z = m[(i, j)];
                s += z.re * z.re + z.im * z.im;
            }
        }
        s
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(ComplexMatrix::zeros(3).frobenius_norm(), 0.0);
        assert_relative_eq!(ComplexMatrix::identity(3).frobenius_norm(), 3f64.sqrt());
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        assert_relative_eq!(brute_sum_sq(&m, false), 30.0);
        assert_relative_eq!(m.frobenius_norm(), 30f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn off_norm_examples() {
        let d = ComplexMatrix::from_diag(&[c(5.0, 0.0), c(-3.0, 0.0), c(7.0, 0.0)]);
        assert_eq!(d.off_norm(), 0.0);
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        assert_relative_eq!(brute_sum_sq(&m, true), 13.0);
        assert_relative_eq!(m.off_norm(), 13f64.sqrt(), epsilon = 1e-15);
        assert_eq!(ComplexMatrix::identity(5).off_norm(), 0.0);
    }

    #[test]
    fn split_examples() {
        let h = ComplexMatrix::from_rows(vec![vec![c(2.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(1.0, 0.0)]])
            .unwrap();
        let (b, z) = h.split_hermitian();
        assert_eq!(b, h);
        assert_eq!(z, ComplexMatrix::zeros(2));

        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let (b, z) = a.split_hermitian();
        assert_eq!(b, ComplexMatrix::from_real_rows(&[&[0.0, 0.5], &[0.5, 0.0]]).unwrap());
        assert_eq!(z, ComplexMatrix::from_real_rows(&[&[0.0, 0.5], &[-0.5, 0.0]]).unwrap());

        let s = ComplexMatrix::from_rows(vec![vec![c(0.0, 2.0), c(1.0, 2.0)], vec![c(-1.0, 2.0), c(0.0, 0.0)]])
            .unwrap();
        let (b, z) = s.split_hermitian();
        assert_eq!(b, ComplexMatrix::zeros(2));
        assert_eq!(z, s);
    }

    #[test]
    fn commutator_examples() {
        let h = ComplexMatrix::from_rows(vec![vec![c(2.0, 0.0), c(1.0, 1.0)], vec![c(1.0, -1.0), c(-1.0, 0.0)]])
            .unwrap();
        assert!(h.commutator().frobenius_norm() < 1e-14);
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(a.commutator(), ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = ComplexMatrix::from_rows(vec![vec![c(s, 0.0), c(0.0, s)], vec![c(0.0, s), c(s, 0.0)]]).unwrap();
        assert!(u.commutator().frobenius_norm() < 1e-15);
    }

    #[test]
    fn vec_offdiag_examples() {
        let d = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        assert!(d.vec_offdiag().iter().all(|z| *z == c(0.0, 0.0)));
        let m = ComplexMatrix::from_rows(vec![vec![c(0.0, 0.0), c(1.0, 2.0)], vec![c(3.0, -1.0), c(0.0, 0.0)]])
            .unwrap();
        assert_eq!(m.vec_offdiag(), vec![c(1.0, 2.0), c(3.0, -1.0)]);
    }

    #[test]
    fn offdiag_index_is_bijective() {
        let n = 6;
        let mut seen = vec![false; n * (n - 1)];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let t = offdiag_index(i, j);
                    assert!(!seen[t]);
                    seen[t] = true;
                }
            }
        }
        assert!(seen.into_iter().all(|s| s));
        assert_eq!(offdiag_index(0, 1), 0);
        assert_eq!(offdiag_index(1, 0), 1);
        assert_eq!(offdiag_index(0, 2), 2);
        assert_eq!(offdiag_index(1, 2), 4);
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = ComplexMatrix::from_rows(vec![vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(3.0, 0.0)]]);
        assert!(matches!(err, Err(Error::Shape { .. })));
    }

    fn arb_matrix() -> impl Strategy<Value = ComplexMatrix> {
        (2usize..7).prop_flat_map(|n| {
            proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0), n * n).prop_map(move |v| {
                ComplexMatrix::from_fn(n, |i, j| {
                    let (re, im) = v[i * n + j];
                    Complex64::new(re, im)
                })
            })
        })
    }

    proptest! {
        #[test]
        fn split_is_orthogonal(a in arb_matrix()) {
            let (b, z) = a.split_hermitian();
            let lhs = a.frobenius_norm_sq();
            let rhs = b.frobenius_norm_sq() + z.frobenius_norm_sq();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1e-300));
            // B + Z rounds twice through (a_ij ± conj a_ji)/2, so the error
            // is at the rounding level of the larger of the two entries.
            let back = b.add(&z);
            for i in 0..a.n() {
                for j in 0..a.n() {
                    let d = back[(i, j)] - a[(i, j)];
                    let re_scale = a[(i, j)].re.abs().max(a[(j, i)].re.abs());
                    let im_scale = a[(i, j)].im.abs().max(a[(j, i)].im.abs());
                    prop_assert!(d.re.abs() <= 2.0 * f64::EPSILON * re_scale);
                    prop_assert!(d.im.abs() <= 2.0 * f64::EPSILON * im_scale);
                    if i == j {
                        prop_assert_eq!(back[(i, i)], a[(i, i)]);
                    }
                }
            }
        }

        #[test]
        fn commutator_hermitian_traceless(a in arb_matrix()) {
            let c = a.commutator();
            let scale = a.frobenius_norm_sq();
            prop_assert!(c.hermitian_defect() <= 1e-14 * scale);
            prop_assert!(c.trace().norm() <= 1e-12 * scale);
        }

        #[test]
        fn off_norm_bounded(a in arb_matrix()) {
            prop_assert!(a.off_norm() <= a.frobenius_norm());
            let v = a.vec_offdiag();
            let vn: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            prop_assert!((vn - a.off_norm()).abs() <= 1e-12 * a.off_norm().max(1.0));
        }

        #[test]
        fn vec_offdiag_round_trip(a in arb_matrix()) {
            let back = ComplexMatrix::scatter_offdiag(&a.vec_offdiag(), &a.diag()).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
