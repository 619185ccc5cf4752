// Eigenvalues two ways: the characteristic polynomial with simultaneous root
// iteration, and the Eberlein limit read block by block.

use eberlein::diagnostics::{detect_blocks, BlockDetection};
use eberlein::pivot::random_sg_ordering;
use eberlein::verification::{char_poly, matching_distance, poly_roots, random_complex};
use eberlein::{run as solve, Result, SolverOptions};

pub fn run() -> Result<()> {
    for (n, seed) in [(4, 1), (5, 2), (6, 3)] {
        let a = random_complex(n, seed);
        let poly = char_poly(&a)?;
        let roots = poly_roots(&poly)?;
        let opts = SolverOptions {
            enforce_order: true,
            ..Default::default()
        };
        let res = solve(&a, &random_sg_ordering(n, seed, None)?, &opts)?;
        let blocks = detect_blocks(&res.matrix, &BlockDetection::default())?.with_eigenvalues(&res.matrix)?;
        let eigs = blocks.all_eigenvalues();
        println!("n = {n}, blocks {:?}, {} sweeps", blocks.sizes(), res.sweeps);
        for z in &eigs {
            println!("  {:+.10} {:+.10}i   |p(z)| = {:.1e}", z.re, z.im, poly.eval(*z).norm());
        }
        println!("  matching distance to polynomial roots: {:.2e}", matching_distance(&eigs, &roots));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
