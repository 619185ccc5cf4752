// Driving the command-line runner from code: write a matrix file, run with a
// seeded strategy, print `summary.txt`. Equivalent to
// `eberlein --input a.csv --out DIR --strategy sg:9 --sort --eigvecs --trace`.

use std::fs;
use std::path::Path;

use eberlein::cli::{run_command, write_matrix, RunConfig, StrategySpec};
use eberlein::verification::random_complex;
use eberlein::Result;

pub fn run(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let input = dir.join("a.csv");
    write_matrix(&random_complex(7, 21), fs::File::create(&input)?)?;
    let config = RunConfig {
        strategy: "sg:9".parse::<StrategySpec>()?,
        sort: true,
        eigvecs: true,
        trace: true,
        ..RunConfig::new(&input, dir.join("out"))
    };
    let (code, outcome) = run_command(&config);
    println!("exit code {code}");
    print!("{}", fs::read_to_string(dir.join("out").join("summary.txt"))?);
    outcome.map(|_| ())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("eberlein-cli"));
    run(&dir)
}
