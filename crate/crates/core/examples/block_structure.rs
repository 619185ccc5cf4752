// Block structure of the limit: equal real parts with distinct eigenvalues
// stay coupled in a block, while a multiple eigenvalue whose couplings die
// out leaves singletons. Prints log10|a_ij| of the final iterate.

use eberlein::diagnostics::{detect_blocks, BlockDetection};
use eberlein::verification::{known_spectrum_matrix, matching_distance};
use eberlein::{run as solve, Complex64, ComplexMatrix, PivotOrdering, Result, SolverOptions};

fn heat(a: &ComplexMatrix) {
    const SHADES: &[u8] = b" .:-=+*#%@";
    for i in 0..a.n() {
        let row: String = a
            .row(i)
            .iter()
            .map(|z| {
                // -16 .. 1 mapped onto the shade ramp
                let l = z.norm().max(1e-16).log10().clamp(-16.0, 1.0);
                let k = ((l + 16.0) / 17.0 * (SHADES.len() - 1) as f64).round() as usize;
                SHADES[k] as char
            })
            .flat_map(|c| [c, c])
            .collect();
        println!("  |{row}|");
    }
}

fn case(name: &str, spectrum: &[Complex64], seed: u64) -> Result<()> {
    let n = spectrum.len();
    let (a, spectrum) = known_spectrum_matrix(spectrum, 1.0, seed)?;
    let opts = SolverOptions {
        enforce_order: true,
        ..Default::default()
    };
    let res = solve(&a, &PivotOrdering::row(n)?, &opts)?;
    let blocks = detect_blocks(&res.matrix, &BlockDetection::default())?.with_eigenvalues(&res.matrix)?;
    println!("{name}: {} after {} sweeps", res.stop_reason.name(), res.sweeps);
    heat(&res.matrix);
    for ((range, mu), eigs) in blocks.ranges.iter().zip(&blocks.mu).zip(&blocks.block_eigenvalues) {
        let list: Vec<String> = eigs.iter().map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect();
        println!("  rows {:2}-{:2}  mu {:+.6}  {}", range.start + 1, range.end, mu, list.join(", "));
    }
    println!(
        "  eigenvalue matching distance {:.2e}, largest coupling between blocks {:.1e}\n",
        matching_distance(&blocks.all_eigenvalues(), &spectrum),
        blocks.max_coupling
    );
    Ok(())
}

pub fn run() -> Result<()> {
    let c = Complex64::new;
    case(
        "conjugate pairs sharing real part 1",
        &[
            c(5.0, 0.0),
            c(4.0, 0.0),
            c(3.0, 0.0),
            c(1.0, 2.0),
            c(1.0, -2.0),
            c(1.0, 1.0),
            c(1.0, -1.0),
            c(-1.0, 0.0),
            c(-2.0, 0.0),
            c(-3.0, 0.0),
        ],
        31,
    )?;
    case(
        "quadruple eigenvalue 1-i",
        &[
            c(-2.0, 1.0),
            c(-2.0, 1.0),
            c(-2.0, 2.0),
            c(1.0, -1.0),
            c(1.0, -1.0),
            c(1.0, -1.0),
            c(1.0, -1.0),
            c(2.0, -1.0),
            c(2.0, 3.0),
            c(2.0, 1.0),
        ],
        32,
    )
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
