// A random complex matrix under a few random generalized serial strategies:
// off(A), off(B) and ‖C(A)‖ per sweep. Pass the dimension as the first
// argument (default 50).

use eberlein::pivot::random_sg_ordering;
use eberlein::verification::random_complex;
use eberlein::{run as solve, Result, SolverOptions};

pub fn run(n: usize, strategies: u64) -> Result<()> {
    let a = random_complex(n, 7);
    for s in 0..strategies {
        let ordering = random_sg_ordering(n, 500 + s, None)?;
        let res = solve(&a, &ordering, &SolverOptions::default())?;
        println!("strategy {} ({})", s + 1, ordering.provenance().describe());
        println!("  sweep      off(A)      off(B)     |C(A)|");
        for r in &res.sweep_log {
            println!("  {:5} {:11.3e} {:11.3e} {:10.3e}", r.sweep, r.off_a, r.off_b, r.norm_c);
        }
        println!("  stopped: {} after {} sweeps\n", res.stop_reason.name(), res.sweeps);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(50);
    run(n, 3)
}
