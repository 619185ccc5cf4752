// Jacobi annihilators have spectral norm one (zero for n = 2); the operator
// of a whole serial sweep is a strict contraction. Prints the largest
// operator norm seen per dimension.

use std::f64::consts::{FRAC_PI_4, PI};

use eberlein::pivot::random_serial_ordering;
use eberlein::rng::SeededRng;
use eberlein::verification::{jacobi_annihilator, jacobi_operator, spectral_norm};
use eberlein::{Result, Rotation};

pub fn run(trials: u64) -> Result<()> {
    let mut rng = SeededRng::new(1);
    let mut angle = |p, q| Rotation::from_angles(p, q, PI * rng.symmetric(), FRAC_PI_4 * rng.symmetric());

    let two = jacobi_annihilator(2, 0, 1, &angle(0, 1))?;
    println!("n = 2 annihilator norm: {}", spectral_norm(&two.matrix)?);
    for n in 3..=6 {
        let single = jacobi_annihilator(n, 0, n - 1, &angle(0, n - 1))?;
        let mut worst: f64 = 0.0;
        for t in 0..trials {
            let ordering = random_serial_ordering(n, 100 * n as u64 + t)?;
            let rots: Vec<Rotation> = ordering.pairs().iter().map(|&(p, q)| angle(p, q)).collect();
            worst = worst.max(spectral_norm(&jacobi_operator(&ordering, &rots)?)?);
        }
        println!(
            "n = {n}: annihilator norm {:.12}, largest operator norm over {trials} orderings {worst:.6}",
            spectral_norm(&single.matrix)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run(100)
}
