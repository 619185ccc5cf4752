// One Eberlein step taken apart: the rotation that annihilates the pivot of
// the Hermitian part, then the shear that reduces the Frobenius norm.

use eberlein::transforms::{apply_rotation, apply_shear, compute_rotation, compute_shear};
use eberlein::{ComplexMatrix, Mode, Result};

fn show(label: &str, a: &ComplexMatrix) {
    println!("{label}:");
    for i in 0..a.n() {
        let row: Vec<String> = a.row(i).iter().map(|z| format!("{:>8.4}{:+.4}i", z.re, z.im)).collect();
        println!("  {}", row.join("  "));
    }
}

pub fn run() -> Result<()> {
    for rows in [[[0.0, 1.0], [0.0, 0.0]], [[1.0, 1.0], [0.0, -1.0]]] {
        let a = ComplexMatrix::from_real_rows(&[&rows[0], &rows[1]])?;
        show("A", &a);
        let r = compute_rotation(&a.hermitian_part(), 0, 1, false)?;
        let rotated = apply_rotation(&a, &r)?;
        let (s, ws) = compute_shear(&rotated, 0, 1, Mode::Complex)?;
        let next = apply_shear(&rotated, &s)?;
        println!(
            "rotation: alpha {:.4}, phi {:.4}; shear: beta {:.4}, psi {:.4}, |c_pq| {:.4}",
            r.alpha,
            r.phi(),
            s.beta,
            s.psi(),
            ws.c_pq.norm()
        );
        show("after rotation", &rotated);
        show("after shear", &next);
        println!(
            "|A|^2 {:.6} -> {:.6}, predicted reduction {:.6}, |C(A)| {:.4} -> {:.4}\n",
            a.frobenius_norm_sq(),
            next.frobenius_norm_sq(),
            s.delta_pred,
            a.commutator().frobenius_norm(),
            next.commutator().frobenius_norm()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
