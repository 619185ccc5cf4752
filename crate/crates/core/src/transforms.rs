//! The two pivot-plane transformations of one Eberlein step.
//!
//! A step at pivot `(p, q)` first applies a unitary plane rotation
//! `Ã = R* A R` that annihilates the `(p, q)` entry of the Hermitian part of
//! `A`, then a unimodular shear `A' = S⁻¹ Ã S` that lowers the Frobenius norm.
//! Both differ from the identity only in the 2x2 pivot block:
//!
//! ```text
//! R̂ = [  cos φ           -e^{iα} sin φ ]     Ŝ = [  cosh ψ           -i e^{iβ} sinh ψ ]
//!     [  e^{-iα} sin φ    cos φ        ]         [  i e^{-iβ} sinh ψ   cosh ψ         ]
//! ```
//!
//! In real mode `α = π` and `β = π/2`, so both blocks are real.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Relative size of `|c̃_pq|` (against `‖Ã‖²_F`) below which the shear is skipped.
pub const SHEAR_SKIP_RATIO: f64 = 1e-15;

const HERMITIAN_TOL: f64 = 1e-12;

type Block = [[Complex64; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Complex,
    Real,
}

/// Unitary plane rotation acting in the `(p, q)` plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation {
    pub p: usize,
    pub q: usize,
    pub alpha: f64,
    pub cos_phi: f64,
    pub sin_phi: f64,
    /// Set when the rotation was shifted by a quarter turn to keep the real
    /// parts of the diagonal in decreasing order; `|φ| <= π/4` does not hold
    /// for such rotations.
    pub exchanged: bool,
    phase: Complex64,
}

impl Rotation {
    pub fn identity(p: usize, q: usize) -> Self {
        Self {
            p,
            q,
            alpha: 0.0,
            cos_phi: 1.0,
            sin_phi: 0.0,
            exchanged: false,
            phase: Complex64::new(1.0, 0.0),
        }
    }

    pub fn from_angles(p: usize, q: usize, alpha: f64, phi: f64) -> Self {
        Self {
            p,
            q,
            alpha,
            cos_phi: phi.cos(),
            sin_phi: phi.sin(),
            exchanged: false,
            phase: Complex64::from_polar(1.0, alpha),
        }
    }

    /// `e^{iα}`; exactly `-1` for real-mode rotations.
    pub fn phase(&self) -> Complex64 {
        self.phase
    }

    pub fn phi(&self) -> f64 {
        self.sin_phi.atan2(self.cos_phi)
    }

    pub fn within_quarter_turn(&self) -> bool {
        self.cos_phi >= self.sin_phi.abs() - 1e-14
    }

    pub fn is_identity(&self) -> bool {
        self.sin_phi == 0.0 && self.cos_phi == 1.0
    }

    pub fn block(&self) -> Block {
        let (c, s, e) = (self.cos_phi, self.sin_phi, self.phase);
        [
            [Complex64::new(c, 0.0), -(e * s)],
            [e.conj() * s, Complex64::new(c, 0.0)],
        ]
    }

    pub fn inverse(&self) -> Self {
        Self {
            sin_phi: -self.sin_phi,
            ..*self
        }
    }

    /// The full `n x n` rotation matrix.
    pub fn to_matrix(&self, n: usize) -> ComplexMatrix {
        embed(n, self.p, self.q, &self.block())
    }
}

/// Unimodular non-unitary shear acting in the `(p, q)` plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Shear {
    pub p: usize,
    pub q: usize,
    pub beta: f64,
    pub cosh_psi: f64,
    pub sinh_psi: f64,
    /// Norm reduction `‖Ã‖² - ‖S⁻¹ÃS‖²` predicted by the closed-form expansion.
    pub delta_pred: f64,
    /// True when the skip rule forced `ψ = 0`.
    pub skipped: bool,
    phase: Complex64,
}

impl Shear {
    pub fn identity(p: usize, q: usize) -> Self {
        Self {
            p,
            q,
            beta: 0.0,
            cosh_psi: 1.0,
            sinh_psi: 0.0,
            delta_pred: 0.0,
            skipped: false,
            phase: Complex64::new(1.0, 0.0),
        }
    }

    /// A shear with explicit angles; `delta_pred` is left at zero.
    pub fn from_angles(p: usize, q: usize, beta: f64, psi: f64) -> Self {
        Self {
            p,
            q,
            beta,
            cosh_psi: psi.cosh(),
            sinh_psi: psi.sinh(),
            delta_pred: 0.0,
            skipped: false,
            phase: Complex64::from_polar(1.0, beta),
        }
    }

    /// `e^{iβ}`; exactly `i` for real-mode shears.
    pub fn phase(&self) -> Complex64 {
        self.phase
    }

    pub fn psi(&self) -> f64 {
        self.sinh_psi.asinh()
    }

    pub fn is_identity(&self) -> bool {
        self.sinh_psi == 0.0 && self.cosh_psi == 1.0
    }

    pub fn block(&self) -> Block {
        let (ch, sh) = (self.cosh_psi, self.sinh_psi);
        // -i e^{iβ}
        let w = Complex64::new(self.phase.im, -self.phase.re);
        [
            [Complex64::new(ch, 0.0), w * sh],
            [w.conj() * sh, Complex64::new(ch, 0.0)],
        ]
    }

    /// Closed-form inverse block (the adjugate, since the determinant is one).
    pub fn inverse_block(&self) -> Block {
        let [[a, b], [c, d]] = self.block();
        [[d, -b], [-c, a]]
    }

    pub fn inverse(&self) -> Self {
        Self {
            sinh_psi: -self.sinh_psi,
            delta_pred: 0.0,
            ..*self
        }
    }

    pub fn to_matrix(&self, n: usize) -> ComplexMatrix {
        embed(n, self.p, self.q, &self.block())
    }

    pub fn to_inverse_matrix(&self, n: usize) -> ComplexMatrix {
        embed(n, self.p, self.q, &self.inverse_block())
    }
}

/// Intermediate quantities of the norm-reduction expansion at one pivot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShearWorkspace {
    pub g: f64,
    pub h: f64,
    pub l: Complex64,
    pub d_tilde: Complex64,
    pub xi_tilde: Complex64,
    /// `ã_pq - ã_qp`; only meaningful in real mode.
    pub e_tilde: Option<f64>,
    /// Pivot entry of `C(Ã)`.
    pub c_pq: Complex64,
}

fn embed(n: usize, p: usize, q: usize, b: &Block) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(n);
    m[(p, p)] = b[0][0];
    m[(p, q)] = b[0][1];
    m[(q, p)] = b[1][0];
    m[(q, q)] = b[1][1];
    m
}

fn adjoint(b: &Block) -> Block {
    [[b[0][0].conj(), b[1][0].conj()], [b[0][1].conj(), b[1][1].conj()]]
}

fn mul2(x: &Block, y: &Block) -> Block {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, o) in row.iter_mut().enumerate() {
            *o = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

fn check_pivot(n: usize, p: usize, q: usize) -> Result<()> {
    if p >= q || q >= n {
        return Err(Error::IndexOutOfRange { p, q, n });
    }
    Ok(())
}

/// `A <- L A M` where `L` and `M` differ from the identity only in the
/// `(p, q)` block. Only rows and columns `p` and `q` are touched.
pub(crate) fn two_sided_in_place(a: &mut ComplexMatrix, p: usize, q: usize, left: &Block, right: &Block) {
    let n = a.n();
    for j in 0..n {
        let x = a[(p, j)];
        let y = a[(q, j)];
        a[(p, j)] = left[0][0] * x + left[0][1] * y;
        a[(q, j)] = left[1][0] * x + left[1][1] * y;
    }
    right_in_place(a, p, q, right);
}

/// `A <- A M` on columns `p` and `q`.
pub(crate) fn right_in_place(a: &mut ComplexMatrix, p: usize, q: usize, right: &Block) {
    for i in 0..a.n() {
        let x = a[(i, p)];
        let y = a[(i, q)];
        a[(i, p)] = x * right[0][0] + y * right[1][0];
        a[(i, q)] = x * right[0][1] + y * right[1][1];
    }
}

/// `A <- L A` on rows `p` and `q`.
pub(crate) fn left_in_place(a: &mut ComplexMatrix, p: usize, q: usize, left: &Block) {
    for j in 0..a.n() {
        let x = a[(p, j)];
        let y = a[(q, j)];
        a[(p, j)] = left[0][0] * x + left[0][1] * y;
        a[(q, j)] = left[1][0] * x + left[1][1] * y;
    }
}

fn sign(x: f64) -> f64 {
    // sign(0) = +1
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Annihilating rotation from the pivot entries of a Hermitian matrix.
pub(crate) fn rotation_from_pivot(
    p: usize,
    q: usize,
    b_pp: f64,
    b_qq: f64,
    b_pq: Complex64,
    mode: Mode,
    enforce_order: bool,
) -> Rotation {
    let mut rot = match mode {
        Mode::Complex => {
            let r = b_pq.norm();
            if r == 0.0 {
                Rotation::identity(p, q)
            } else {
                let d = b_pp - b_qq;
                let t = 2.0 * r * sign(d) / (d.abs() + d.hypot(2.0 * r));
                let c = 1.0 / (1.0 + t * t).sqrt();
                Rotation {
                    p,
                    q,
                    alpha: b_pq.arg(),
                    cos_phi: c,
                    sin_phi: t * c,
                    exchanged: false,
                    phase: b_pq / r,
                }
            }
        }
        Mode::Real => {
            let b = b_pq.re;
            let (c, s) = if b == 0.0 {
                (1.0, 0.0)
            } else {
                let d = b_qq - b_pp;
                let t = 2.0 * b * sign(d) / (d.abs() + d.hypot(2.0 * b));
                let c = 1.0 / (1.0 + t * t).sqrt();
                (c, t * c)
            };
            Rotation {
                p,
                q,
                alpha: PI,
                cos_phi: c,
                sin_phi: s,
                exchanged: false,
                phase: Complex64::new(-1.0, 0.0),
            }
        }
    };

    if enforce_order {
        let b_hat = [
            [Complex64::new(b_pp, 0.0), b_pq],
            [b_pq.conj(), Complex64::new(b_qq, 0.0)],
        ];
        let r_hat = rot.block();
        let rotated = mul2(&mul2(&adjoint(&r_hat), &b_hat), &r_hat);
        if rotated[0][0].re < rotated[1][1].re {
            // φ ± π/2, whichever keeps cos φ >= 0; swaps the diagonal pair.
            let (c, s) = (rot.cos_phi, rot.sin_phi);
            let (c2, s2) = if s >= 0.0 { (s, -c) } else { (-s, c) };
            rot.cos_phi = c2;
            rot.sin_phi = s2;
            rot.exchanged = true;
        }
    }
    rot
}

fn hermitian_pivot(b: &ComplexMatrix, p: usize, q: usize) -> Result<(f64, f64, Complex64)> {
    check_pivot(b.n(), p, q)?;
    let (bpp, bqq, bpq, bqp) = (b[(p, p)], b[(q, q)], b[(p, q)], b[(q, p)]);
    let scale = 1f64.max(bpp.norm()).max(bqq.norm()).max(bpq.norm());
    let deviation = (bpq - bqp.conj()).norm().max(bpp.im.abs()).max(bqq.im.abs());
    if deviation > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { p, q, deviation });
    }
    Ok((bpp.re, bqq.re, bpq))
}

/// Rotation annihilating `b_pq` of the Hermitian matrix `b`.
///
/// `α = arg(b_pq)` and `tan φ = 2|b_pq| sign(d) / (|d| + sqrt(d² + 4|b_pq|²))`
/// with `d = b_pp - b_qq`, so `|φ| <= π/4`. With `enforce_order` the rotation
/// is exchanged whenever it would leave `Re ã_pp < Re ã_qq`.
pub fn compute_rotation(b: &ComplexMatrix, p: usize, q: usize, enforce_order: bool) -> Result<Rotation> {
    let (bpp, bqq, bpq) = hermitian_pivot(b, p, q)?;
    Ok(rotation_from_pivot(p, q, bpp, bqq, bpq, Mode::Complex, enforce_order))
}

/// Real-arithmetic rotation (`α = π`) with
/// `tan 2φ = 2 b_pq / (b_qq - b_pp)`.
pub fn compute_rotation_real(b: &ComplexMatrix, p: usize, q: usize, enforce_order: bool) -> Result<Rotation> {
    let (bpp, bqq, bpq) = hermitian_pivot(b, p, q)?;
    if bpq.im != 0.0 {
        return Err(Error::NotReal {
            row: p,
            col: q,
            imag: bpq.im,
        });
    }
    Ok(rotation_from_pivot(p, q, bpp, bqq, bpq, Mode::Real, enforce_order))
}

pub fn apply_rotation_in_place(a: &mut ComplexMatrix, r: &Rotation) -> Result<()> {
    check_pivot(a.n(), r.p, r.q)?;
    let block = r.block();
    two_sided_in_place(a, r.p, r.q, &adjoint(&block), &block);
    Ok(())
}

/// `R* A R`.
pub fn apply_rotation(a: &ComplexMatrix, r: &Rotation) -> Result<ComplexMatrix> {
    let mut out = a.clone();
    apply_rotation_in_place(&mut out, r)?;
    Ok(out)
}

pub fn apply_shear_in_place(a: &mut ComplexMatrix, s: &Shear) -> Result<()> {
    check_pivot(a.n(), s.p, s.q)?;
    two_sided_in_place(a, s.p, s.q, &s.inverse_block(), &s.block());
    Ok(())
}

/// `S⁻¹ Ã S`.
pub fn apply_shear(a_tilde: &ComplexMatrix, s: &Shear) -> Result<ComplexMatrix> {
    let mut out = a_tilde.clone();
    apply_shear_in_place(&mut out, s)?;
    Ok(out)
}

/// Pivot entry of `C(A) = AA* - A*A` in `O(n)`.
pub fn commutator_entry(a: &ComplexMatrix, p: usize, q: usize) -> Complex64 {
    let n = a.n();
    let mut c = Complex64::new(0.0, 0.0);
    for k in 0..n {
        c += a[(p, k)] * a[(q, k)].conj() - a[(k, p)].conj() * a[(k, q)];
    }
    c
}

/// Full norm-reduction expansion for `tanh ψ = t`:
/// `g(1 - cosh2ψ) - h sinh2ψ + ½(|ξ|² + |d|²)(1 - cosh4ψ) + Im(ξ d̄) sinh4ψ`.
fn predicted_delta(g: f64, h: f64, xi: Complex64, d: Complex64, t: f64) -> f64 {
    let t2 = t * t;
    let den = 1.0 - t2;
    let cosh2_m1 = 2.0 * t2 / den;
    let sinh2 = 2.0 * t / den;
    let cosh2 = (1.0 + t2) / den;
    let sinh4 = 2.0 * sinh2 * cosh2;
    let cosh4_m1 = 2.0 * sinh2 * sinh2;
    -g * cosh2_m1 - h * sinh2 - 0.5 * (xi.norm_sqr() + d.norm_sqr()) * cosh4_m1 + (xi * d.conj()).im * sinh4
}

struct Candidate {
    phase: Complex64,
    h: f64,
    xi: Complex64,
    tanh: f64,
    delta: f64,
}

fn xi_for(a: &ComplexMatrix, p: usize, q: usize, phase: Complex64) -> Complex64 {
    let (apq, aqp) = (a[(p, q)], a[(q, p)]);
    let i = Complex64::new(0.0, 1.0);
    (apq + aqp) * phase.re - i * (apq - aqp) * phase.im
}

fn finish_tanh(num: f64, den: f64, p: usize, q: usize) -> Result<f64> {
    let t = if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            return Err(Error::DegenerateShear {
                p,
                q,
                reason: format!("zero denominator with numerator {num:e}"),
            });
        }
    } else {
        num / den
    };
    if !t.is_finite() || t.abs() >= 1.0 {
        return Err(Error::DegenerateShear {
            p,
            q,
            reason: format!("|tanh psi| = {:e} is not below one", t.abs()),
        });
    }
    Ok(t)
}

fn prefers(phase: Complex64) -> bool {
    // β in (-π/2, π/2]
    phase.re > 0.0 || (phase.re == 0.0 && phase.im > 0.0)
}

/// Norm-reducing shear for the rotated iterate `Ã` at pivot `(p, q)`.
pub fn compute_shear(a_tilde: &ComplexMatrix, p: usize, q: usize, mode: Mode) -> Result<(Shear, ShearWorkspace)> {
    check_pivot(a_tilde.n(), p, q)?;
    shear_for_pivot(a_tilde, p, q, mode, a_tilde.frobenius_norm_sq())
}

/// As [`compute_shear`] with `‖Ã‖²_F` supplied by the caller.
pub(crate) fn shear_for_pivot(
    a: &ComplexMatrix,
    p: usize,
    q: usize,
    mode: Mode,
    fro_sq: f64,
) -> Result<(Shear, ShearWorkspace)> {
    let n = a.n();
    let c_pq = commutator_entry(a, p, q);
    let mut g = 0.0;
    let mut l = Complex64::new(0.0, 0.0);
    for i in (0..n).filter(|&i| i != p && i != q) {
        g += a[(i, p)].norm_sqr() + a[(p, i)].norm_sqr() + a[(i, q)].norm_sqr() + a[(q, i)].norm_sqr();
        l += a[(p, i)] * a[(q, i)].conj() - a[(i, p)].conj() * a[(i, q)];
    }
    l *= 2.0;
    let d = a[(p, p)] - a[(q, q)];
    let e_tilde = match mode {
        Mode::Real => Some((a[(p, q)] - a[(q, p)]).re),
        Mode::Complex => None,
    };

    let candidate = |phase: Complex64| -> Result<Candidate> {
        let (cos_b, sin_b) = (phase.re, phase.im);
        let h = -l.re * sin_b + l.im * cos_b;
        let xi = xi_for(a, p, q, phase);
        let tanh = match mode {
            Mode::Complex => {
                let num = 0.5 * (2.0 * (xi * d.conj()).im - h);
                let den = g + 2.0 * (xi.norm_sqr() + d.norm_sqr());
                finish_tanh(num, den, p, q)?
            }
            Mode::Real => {
                let e = e_tilde.unwrap_or(0.0);
                let den = g + 2.0 * (e * e + d.re * d.re);
                finish_tanh(c_pq.re, den, p, q)?
            }
        };
        Ok(Candidate {
            phase,
            h,
            xi,
            tanh,
            delta: predicted_delta(g, h, xi, d, tanh),
        })
    };

    let default_phase = match mode {
        Mode::Complex => Complex64::new(1.0, 0.0),
        Mode::Real => Complex64::new(0.0, 1.0),
    };

    let skip = c_pq.norm() <= SHEAR_SKIP_RATIO * fro_sq;
    let chosen = if skip {
        let h = -l.re * default_phase.im + l.im * default_phase.re;
        Candidate {
            phase: default_phase,
            h,
            xi: xi_for(a, p, q, default_phase),
            tanh: 0.0,
            delta: 0.0,
        }
    } else {
        match mode {
            Mode::Real => candidate(default_phase)?,
            Mode::Complex => {
                // e^{iβ} with tan β = -Re c / Im c, and its antipode β + π.
                let r = c_pq.norm();
                let first = Complex64::new(c_pq.im / r, -c_pq.re / r);
                let (pref, other) = if prefers(first) { (first, -first) } else { (-first, first) };
                let a_cand = candidate(pref)?;
                let b_cand = candidate(other)?;
                if b_cand.delta > a_cand.delta + 1e-14 * fro_sq {
                    b_cand
                } else {
                    a_cand
                }
            }
        }
    };

    let ch = 1.0 / (1.0 - chosen.tanh * chosen.tanh).sqrt();
    let beta = match mode {
        Mode::Real => FRAC_PI_2,
        Mode::Complex => chosen.phase.arg(),
    };
    let shear = Shear {
        p,
        q,
        beta,
        cosh_psi: ch,
        sinh_psi: chosen.tanh * ch,
        delta_pred: chosen.delta,
        skipped: skip,
        phase: chosen.phase,
    };
    let ws = ShearWorkspace {
        g,
        h: chosen.h,
        l,
        d_tilde: d,
        xi_tilde: chosen.xi,
        e_tilde,
        c_pq,
    };
    Ok((shear, ws))
}
