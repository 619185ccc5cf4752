//! The step residuals `E = A^(k+1) - Ã^(k)` and `F = B^(k+1) - B̃^(k)` and
//! their bound `‖E‖²_F, ‖F‖²_F <= (3/2) n² |c̃_pq|`.

use crate::matrix::ComplexMatrix;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualReport {
    pub norm_e_sq: f64,
    pub norm_f_sq: f64,
    /// `1.5 n² |c̃_pq|`.
    pub bound: f64,
    /// Absolute slack allowed on top of the bound, `1e-10 ‖A^(k)‖²_F`.
    pub slack: f64,
    pub satisfied: bool,
}

pub fn residual_report(
    a_k: &ComplexMatrix,
    a_tilde: &ComplexMatrix,
    a_next: &ComplexMatrix,
    b_next: &ComplexMatrix,
    b_tilde: &ComplexMatrix,
    c_pq_abs: f64,
    n: usize,
) -> ResidualReport {
    let norm_e_sq = a_next.sub(a_tilde).frobenius_norm_sq();
    let norm_f_sq = b_next.sub(b_tilde).frobenius_norm_sq();
    let bound = 1.5 * (n * n) as f64 * c_pq_abs;
    let slack = 1e-10 * a_k.frobenius_norm_sq();
    ResidualReport {
        norm_e_sq,
        norm_f_sq,
        bound,
        slack,
        satisfied: norm_e_sq <= bound + slack && norm_f_sq <= bound + slack,
    }
}
