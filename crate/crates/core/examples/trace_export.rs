// Per-step trace and log-magnitude snapshots written as CSV, then read back.
// Files go to `$TMPDIR/eberlein-trace` unless a directory is given.

use std::fs::{self, File};
use std::io::BufReader;
use std::path::Path;

use eberlein::diagnostics::{export_logabs, export_trace, import_trace, DEFAULT_LOGABS_FLOOR};
use eberlein::pivot::random_sg_ordering;
use eberlein::verification::random_complex;
use eberlein::{run as solve, Result, SolverOptions};

pub fn run(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let a = random_complex(12, 5);
    let opts = SolverOptions {
        trace: true,
        ..Default::default()
    };
    let res = solve(&a, &random_sg_ordering(12, 5, None)?, &opts)?;

    let trace_path = dir.join("trace.csv");
    export_trace(&res.trace, File::create(&trace_path)?)?;
    export_logabs(&a, DEFAULT_LOGABS_FLOOR, File::create(dir.join("logabs_start.csv"))?)?;
    export_logabs(&res.matrix, DEFAULT_LOGABS_FLOOR, File::create(dir.join("logabs_final.csv"))?)?;

    let back = import_trace(BufReader::new(File::open(&trace_path)?))?;
    assert_eq!(back, res.trace);
    println!("{} steps written to {}", back.len(), trace_path.display());
    for r in back.iter().step_by(back.len() / 8) {
        println!(
            "  k {:5} sweep {:2} ({:2},{:2})  off(B) {:.3e}  |C| {:.3e}  delta {:.3e}",
            r.k,
            r.sweep,
            r.p + 1,
            r.q + 1,
            r.off_b,
            r.norm_c,
            r.delta_k
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("eberlein-trace"));
    run(&dir)
}
