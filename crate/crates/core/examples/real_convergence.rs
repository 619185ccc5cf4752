// The real variant keeps every iterate real. Complex conjugate eigenvalue
// pairs share a real part, so the iterates approach 2x2 blocks and off(B)
// shrinks only by a roughly constant factor per sweep.

use eberlein::pivot::random_sg_ordering;
use eberlein::verification::random_real;
use eberlein::{run as solve, Mode, Result, SolverOptions};

pub fn run(n: usize, max_sweeps: usize) -> Result<()> {
    let a = random_real(n, 8);
    let ordering = random_sg_ordering(n, 500, None)?;
    let opts = SolverOptions {
        mode: Mode::Real,
        max_sweeps,
        ..Default::default()
    };
    let res = solve(&a, &ordering, &opts)?;
    println!("  sweep      off(B)     |C(A)|   ratio over 10 sweeps");
    for (i, r) in res.sweep_log.iter().enumerate().step_by(10) {
        let ratio = i
            .checked_sub(10)
            .map(|j| format!("{:.3}", r.off_b / res.sweep_log[j].off_b))
            .unwrap_or_default();
        println!("  {:5} {:11.3e} {:10.3e}   {ratio}", r.sweep, r.off_b, r.norm_c);
    }
    println!(
        "stopped: {} after {} sweeps, final matrix real: {}",
        res.stop_reason.name(),
        res.sweeps,
        res.matrix.is_real()
    );
    // a conjugate pair lives on rows i, j with a_ij = -a_ji, wherever i and j are
    let tol = 1e-6 * res.initial_norm;
    let coupled: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| res.matrix[(i, j)].norm() > tol)
        .collect();
    println!("coupled index pairs (one per conjugate eigenvalue pair): {}", coupled.len());
    for (i, j) in coupled.iter().take(4) {
        let (a, b) = (res.matrix[(*i, *i)].re, res.matrix[(*i, *j)].re);
        println!("  rows {}, {}: eigenvalues {a:.6} ± {:.6}i", i + 1, j + 1, b.abs());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run(50, 300)
}
