// A unitarily diagonalizable input stays normal: every shear is skipped and
// the method behaves like complex Jacobi, converging in a few sweeps.

use eberlein::pivot::random_sg_ordering;
use eberlein::solver::{run_observed, Observer, StepEvent};
use eberlein::verification::{matching_distance, random_normal};
use eberlein::{Result, SolverOptions};

#[derive(Default)]
struct ShearCount {
    steps: usize,
    sheared: usize,
}

impl Observer for ShearCount {
    fn on_step(&mut self, ev: &StepEvent<'_>) {
        self.steps += 1;
        if !ev.summary.shear.is_identity() {
            self.sheared += 1;
        }
    }
}

pub fn run(n: usize) -> Result<()> {
    let (a, spectrum) = random_normal(n, 3)?;
    let ordering = random_sg_ordering(n, 4, None)?;
    let mut count = ShearCount::default();
    let res = run_observed(&a, &ordering, &SolverOptions::default(), &mut count)?;
    for r in &res.sweep_log {
        println!("  sweep {:2}: off(A) {:.3e}, off(B) {:.3e}", r.sweep, r.off_a, r.off_b);
    }
    println!(
        "{} steps, {} with a non-trivial shear, |C(A0)| {:.1e}",
        count.steps,
        count.sheared,
        a.commutator().frobenius_norm()
    );
    println!(
        "diagonal vs constructed spectrum: matching distance {:.2e}",
        matching_distance(&res.matrix.diag(), &spectrum)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run(200)
}
