//! Command-line surface: matrix file parsing, strategy specs, and the run
//! command that writes all artifacts into an output directory.
//!
//! Matrix files are CSV, one row per line, each entry `a`, `a+bi`, `a-bi`,
//! `bi` or `-bi` (exponent notation allowed). Artifacts:
//!
//! | file | content |
//! |------|---------|
//! | `eigenvalues.csv` | `block,mu,re,im`, block eigenvalues from the polynomial oracle |
//! | `final_matrix.csv` | final iterate, same format as the input |
//! | `trace.csv` | per-step trace (`--trace`) |
//! | `logabs_<sweep>.csv` | `log10 |a_ij|` snapshots (`--logabs-every`) |
//! | `transform.csv`, `transform_inv.csv` | accumulated `T`, `T⁻¹` (`--eigvecs`) |
//! | `summary.txt` | status, counters, final norms, blocks, ordering provenance |

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Parser;
use num_complex::Complex64;

use crate::diagnostics::{detect_blocks, export_logabs, export_trace, BlockDetection, BlockPartition, DEFAULT_LOGABS_FLOOR};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::pivot::{random_serial_ordering, random_sg_ordering, PivotOrdering, SerialFamily};
use crate::solver::{run_observed, Observer, SolverOptions, SolverResult, SweepRecord};
use crate::transforms::Mode;

pub const DEFAULT_TOL: f64 = 1e-8;

/// Pivot strategy selected on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrategySpec {
    Row,
    Col,
    RowRev,
    ColRev,
    /// Serial ordering with random within-line permutations.
    Perm { seed: Option<u64> },
    /// Random generalized serial ordering.
    Sg { seed: Option<u64>, num_ops: Option<usize> },
    /// Ordering text file (header `n N`, then `i j` lines).
    File(PathBuf),
}

impl FromStr for StrategySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("unknown strategy `{s}`"));
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
        let parts: Vec<&str> = s.splitn(3, ':').collect();
        Ok(match parts[..] {
            ["row"] => StrategySpec::Row,
            ["col"] => StrategySpec::Col,
            ["row_rev"] => StrategySpec::RowRev,
            ["col_rev"] => StrategySpec::ColRev,
            ["perm"] => StrategySpec::Perm { seed: None },
            ["perm", seed] => StrategySpec::Perm { seed: Some(num(seed)?) },
            ["sg"] => StrategySpec::Sg {
                seed: None,
                num_ops: None,
            },
            ["sg", seed] => StrategySpec::Sg {
                seed: Some(num(seed)?),
                num_ops: None,
            },
            ["sg", seed, ops] => StrategySpec::Sg {
                seed: Some(num(seed)?),
                num_ops: Some(ops.parse().map_err(|_| bad())?),
            },
            _ if s.starts_with("file:") && s.len() > 5 => StrategySpec::File(PathBuf::from(&s[5..])),
            _ => return Err(bad()),
        })
    }
}

impl StrategySpec {
    /// `default_seed` is used when the spec carries no seed of its own.
    pub fn build(&self, n: usize, default_seed: u64) -> Result<PivotOrdering> {
        let ordering = match self {
            StrategySpec::Row => PivotOrdering::serial(n, SerialFamily::Row, Vec::new())?,
            StrategySpec::Col => PivotOrdering::serial(n, SerialFamily::Column, Vec::new())?,
            StrategySpec::RowRev => PivotOrdering::serial(n, SerialFamily::RowReversed, Vec::new())?,
            StrategySpec::ColRev => PivotOrdering::serial(n, SerialFamily::ColumnReversed, Vec::new())?,
            StrategySpec::Perm { seed } => random_serial_ordering(n, seed.unwrap_or(default_seed))?,
            StrategySpec::Sg { seed, num_ops } => random_sg_ordering(n, seed.unwrap_or(default_seed), *num_ops)?,
            StrategySpec::File(path) => PivotOrdering::from_text(&fs::read_to_string(path)?)?,
        };
        if ordering.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: ordering.n(),
            });
        }
        Ok(ordering)
    }

    pub fn label(&self) -> String {
        match self {
            StrategySpec::Row => "row".into(),
            StrategySpec::Col => "col".into(),
            StrategySpec::RowRev => "row_rev".into(),
            StrategySpec::ColRev => "col_rev".into(),
            StrategySpec::Perm { seed } => seed.map_or("perm".into(), |s| format!("perm:{s}")),
            StrategySpec::Sg { seed, num_ops } => match (seed, num_ops) {
                (None, _) => "sg".into(),
                (Some(s), None) => format!("sg:{s}"),
                (Some(s), Some(k)) => format!("sg:{s}:{k}"),
            },
            StrategySpec::File(p) => format!("file:{}", p.display()),
        }
    }
}

/// Command-line arguments of the `eberlein` binary.
#[derive(Parser, Debug, Clone)]
#[command(name = "eberlein", version, about = "Norm-reducing Jacobi-type eigensolver for arbitrary square matrices")]
pub struct CliArgs {
    /// Matrix CSV file
    #[arg(long)]
    pub input: PathBuf,
    /// Output directory (created if missing)
    #[arg(long)]
    pub out: PathBuf,
    /// row | col | row_rev | col_rev | perm[:SEED] | sg[:SEED[:NUM_OPS]] | file:PATH
    #[arg(long, default_value = "row")]
    pub strategy: String,
    /// Stop when a sweep changes off(B) by less than this
    #[arg(long, env = "EBERLEIN_DEFAULT_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = 100)]
    pub max_sweeps: usize,
    /// Real arithmetic (the input must be real)
    #[arg(long)]
    pub real: bool,
    /// Keep the diagonal real parts in decreasing order
    #[arg(long)]
    pub sort: bool,
    /// Write the accumulated transformation and its inverse
    #[arg(long)]
    pub eigvecs: bool,
    /// Write the per-step trace
    #[arg(long)]
    pub trace: bool,
    /// Write a log-magnitude snapshot every this many sweeps (0 = off)
    #[arg(long, default_value_t = 0)]
    pub logabs_every: usize,
    /// Seed for randomized strategies that do not carry their own
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub output_dir: PathBuf,
    pub strategy: StrategySpec,
    pub tol: f64,
    pub max_sweeps: usize,
    pub mode: Mode,
    pub sort: bool,
    pub eigvecs: bool,
    pub trace: bool,
    pub logabs_every: usize,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(input_path: impl Into<PathBuf>, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            input_path: input_path.into(),
            output_dir: output_dir.into(),
            strategy: StrategySpec::Row,
            tol: DEFAULT_TOL,
            max_sweeps: 100,
            mode: Mode::Complex,
            sort: false,
            eigvecs: false,
            trace: false,
            logabs_every: 0,
            seed: 0,
        }
    }
}

impl TryFrom<CliArgs> for RunConfig {
    type Error = Error;

    fn try_from(a: CliArgs) -> Result<Self> {
        Ok(Self {
            strategy: a.strategy.parse()?,
            input_path: a.input,
            output_dir: a.out,
            tol: a.tol,
            max_sweeps: a.max_sweeps,
            mode: if a.real { Mode::Real } else { Mode::Complex },
            sort: a.sort,
            eigvecs: a.eigvecs,
            trace: a.trace,
            logabs_every: a.logabs_every,
            seed: a.seed,
        })
    }
}

fn parse_real(text: &str, line: usize, column: usize) -> Result<f64> {
    let v: f64 = text.parse().map_err(|_| Error::Parse {
        line,
        column,
        message: format!("malformed number `{text}`"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            column,
            message: format!("non-finite number `{text}`"),
        });
    }
    Ok(v)
}

/// One scalar: `a`, `a+bi`, `a-bi`, `bi`, `-bi`.
pub fn parse_scalar(text: &str, line: usize, column: usize) -> Result<Complex64> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse {
            line,
            column,
            message: "empty entry".into(),
        });
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(parse_real(s, line, column)?, 0.0));
    };
    let bytes = body.as_bytes();
    // last sign that is neither leading nor part of an exponent
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => parse_real(t, line, column),
        }
    };
    Ok(match split {
        Some(k) => Complex64::new(parse_real(&body[..k], line, column)?, imag(&body[k..])?),
        None => Complex64::new(0.0, imag(body)?),
    })
}

pub fn parse_matrix_str(text: &str) -> Result<ComplexMatrix> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    let mut line_numbers = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let mut row = Vec::new();
        let mut column = 1;
        for field in line.split(',') {
            let lead = field.len() - field.trim_start().len();
            row.push(parse_scalar(field, lineno, column + lead)?);
            column += field.len() + 1;
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Parse {
                    line: lineno,
                    column: 1,
                    message: format!("ragged row: {} entries, expected {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
        line_numbers.push(lineno);
    }
    let n = rows.len();
    if n == 0 {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty matrix".into(),
        });
    }
    if rows[0].len() != n {
        return Err(Error::Parse {
            line: line_numbers[n - 1],
            column: 1,
            message: format!("matrix is not square: {n} rows of {} entries", rows[0].len()),
        });
    }
    ComplexMatrix::from_rows(rows)
}

pub fn parse_matrix_file(path: &Path) -> Result<ComplexMatrix> {
    parse_matrix_str(&fs::read_to_string(path)?)
}

pub fn format_scalar(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{}{:.16e}i", z.re, sign, z.im.abs())
}

pub fn write_matrix(m: &ComplexMatrix, mut out: impl Write) -> Result<()> {
    for i in 0..m.n() {
        let row: Vec<String> = m.row(i).iter().map(|&z| format_scalar(z)).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    Ok(BufWriter::new(fs::File::create(path)?))
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<fs::File>) -> Result<()>) -> Result<()> {
    let mut w = create(path)?;
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

/// Writes `logabs_<sweep>.csv` every `every` sweeps.
struct SnapshotWriter<'a> {
    dir: &'a Path,
    every: usize,
    last_written: Option<usize>,
    error: Option<Error>,
}

impl SnapshotWriter<'_> {
    fn write(&mut self, sweep: usize, a: &ComplexMatrix) {
        if self.error.is_some() || self.last_written == Some(sweep) {
            return;
        }
        let path = self.dir.join(format!("logabs_{sweep}.csv"));
        match write_file(&path, |w| export_logabs(a, DEFAULT_LOGABS_FLOOR, w)) {
            Ok(()) => self.last_written = Some(sweep),
            Err(e) => self.error = Some(e),
        }
    }
}

impl Observer for SnapshotWriter<'_> {
    fn on_sweep(&mut self, record: &SweepRecord, a: &ComplexMatrix) {
        if self.every > 0 && record.sweep.is_multiple_of(self.every) {
            self.write(record.sweep, a);
        }
    }
}

/// What a completed run produced.
#[derive(Debug)]
pub struct RunOutcome {
    pub result: SolverResult,
    pub blocks: BlockPartition,
    pub ordering: PivotOrdering,
    /// `‖T⁻¹ A^(0) T - A_final‖_F` when `--eigvecs` was given.
    pub transform_residual: Option<f64>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.result.converged {
            0
        } else {
            2
        }
    }
}

fn execute(config: &RunConfig) -> Result<RunOutcome> {
    let a0 = parse_matrix_file(&config.input_path)?;
    let ordering = config.strategy.build(a0.n(), config.seed)?;
    let opts = SolverOptions {
        tol_sweep: config.tol,
        max_sweeps: config.max_sweeps,
        mode: config.mode,
        enforce_order: config.sort,
        accumulate: config.eigvecs,
        trace: config.trace,
        ..Default::default()
    };
    let dir = &config.output_dir;
    let mut snapshots = SnapshotWriter {
        dir,
        every: config.logabs_every,
        last_written: None,
        error: None,
    };
    let result = run_observed(&a0, &ordering, &opts, &mut snapshots)?;
    if config.logabs_every > 0 {
        snapshots.write(result.sweeps, &result.matrix);
    }
    if let Some(e) = snapshots.error {
        return Err(e);
    }

    let detection = BlockDetection {
        sorted: config.sort && result.converged,
        ..Default::default()
    };
    let blocks = detect_blocks(&result.matrix, &detection)?.with_eigenvalues(&result.matrix)?;

    write_file(&dir.join("final_matrix.csv"), |w| write_matrix(&result.matrix, w))?;
    write_file(&dir.join("eigenvalues.csv"), |w| {
        writeln!(w, "block,mu,re,im")?;
        for (b, (mu, eigs)) in blocks.mu.iter().zip(&blocks.block_eigenvalues).enumerate() {
            for z in eigs {
                writeln!(w, "{},{:.16e},{:.16e},{:.16e}", b + 1, mu, z.re, z.im)?;
            }
        }
        Ok(())
    })?;
    if config.trace {
        write_file(&dir.join("trace.csv"), |w| export_trace(&result.trace, w))?;
    }
    if let (Some(t), Some(t_inv)) = (&result.transform, &result.transform_inv) {
        write_file(&dir.join("transform.csv"), |w| write_matrix(t, w))?;
        write_file(&dir.join("transform_inv.csv"), |w| write_matrix(t_inv, w))?;
    }
    Ok(RunOutcome {
        transform_residual: result.transform_residual(&a0),
        result,
        blocks,
        ordering,
    })
}

fn summary_text(config: &RunConfig, outcome: &std::result::Result<RunOutcome, Error>) -> String {
    let mut s = String::new();
    let mode = match config.mode {
        Mode::Complex => "complex",
        Mode::Real => "real",
    };
    let _ = writeln!(s, "strategy: {}", config.strategy.label());
    let _ = writeln!(s, "mode: {mode}");
    let _ = writeln!(s, "tol: {:e}", config.tol);
    let _ = writeln!(s, "max_sweeps: {}", config.max_sweeps);
    let _ = writeln!(s, "sort: {}", config.sort);
    match outcome {
        Err(e) => {
            let _ = writeln!(s, "status: error");
            let _ = writeln!(s, "error: {e}");
        }
        Ok(o) => {
            let r = &o.result;
            let status = if r.converged { "converged" } else { "max_sweeps" };
            let _ = writeln!(s, "status: {status}");
            let _ = writeln!(s, "converged: {}", r.converged);
            let _ = writeln!(s, "stop_reason: {}", r.stop_reason.name());
            let _ = writeln!(s, "n: {}", r.matrix.n());
            let _ = writeln!(s, "sweeps: {}", r.sweeps);
            let _ = writeln!(s, "steps: {}", r.steps);
            let _ = writeln!(s, "initial_fro: {:.16e}", r.initial_norm);
            let _ = writeln!(s, "final_off_B: {:.16e}", r.final_off_b);
            let _ = writeln!(s, "final_norm_C: {:.16e}", r.final_norm_c);
            let _ = writeln!(s, "final_off_A: {:.16e}", r.matrix.off_norm());
            if let Some(res) = o.transform_residual {
                let _ = writeln!(s, "transform_residual: {res:.16e}");
            }
            let sizes: Vec<String> = o.blocks.sizes().iter().map(|b| b.to_string()).collect();
            let _ = writeln!(s, "blocks: {}", sizes.join(","));
            for (b, (range, mu)) in o.blocks.ranges.iter().zip(&o.blocks.mu).enumerate() {
                let _ = writeln!(
                    s,
                    "block {}: rows {}-{}, size {}, mu {:.16e}",
                    b + 1,
                    range.start + 1,
                    range.end,
                    range.len(),
                    mu
                );
            }
            let _ = writeln!(s, "max_block_coupling: {:.16e}", o.blocks.max_coupling);
            let _ = writeln!(s, "ordering: {}", o.ordering.provenance().describe());
            let _ = writeln!(s, "provenance:");
            for line in o.ordering.provenance().to_log().lines() {
                let _ = writeln!(s, "  {line}");
            }
        }
    }
    s
}

/// Runs the solver for `config`, writing all artifacts and `summary.txt`
/// (also on failure). Exit code: 0 converged, 2 sweep budget exhausted,
/// 1 error.
pub fn run_command(config: &RunConfig) -> (i32, std::result::Result<RunOutcome, Error>) {
    if let Err(e) = fs::create_dir_all(&config.output_dir) {
        return (1, Err(e.into()));
    }
    let outcome = execute(config);
    let summary = summary_text(config, &outcome);
    let write = fs::write(config.output_dir.join("summary.txt"), summary);
    match (outcome, write) {
        (Ok(o), Ok(())) => (o.exit_code(), Ok(o)),
        (Ok(_), Err(e)) => (1, Err(e.into())),
        (Err(e), _) => (1, Err(e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn scalar_forms() {
        assert_eq!(parse_scalar("1.5", 1, 1).unwrap(), c(1.5, 0.0));
        assert_eq!(parse_scalar(" 1.5-2.25i ", 1, 1).unwrap(), c(1.5, -2.25));
        assert_eq!(parse_scalar("1+2i", 1, 1).unwrap(), c(1.0, 2.0));
        assert_eq!(parse_scalar("3i", 1, 1).unwrap(), c(0.0, 3.0));
        assert_eq!(parse_scalar("-3i", 1, 1).unwrap(), c(0.0, -3.0));
        assert_eq!(parse_scalar("-i", 1, 1).unwrap(), c(0.0, -1.0));
        assert_eq!(parse_scalar("1e-3+2E+2i", 1, 1).unwrap(), c(1e-3, 200.0));
        assert_eq!(parse_scalar("-1e-3-2e-2i", 1, 1).unwrap(), c(-1e-3, -2e-2));
        for bad in ["", "1+", "abc", "1+2j", "nan", "1..2i"] {
            assert!(parse_scalar(bad, 3, 4).is_err(), "{bad}");
        }
    }

    #[test]
    fn matrix_examples() {
        assert_eq!(parse_matrix_str("1,0\n0,1").unwrap(), ComplexMatrix::identity(2));
        let m = parse_matrix_str("0,1+2i\n-1-2i,0").unwrap();
        assert_eq!(m[(0, 1)], c(1.0, 2.0));
        assert_eq!(m[(1, 0)], c(-1.0, -2.0));
        assert_eq!(m[(0, 0)], c(0.0, 0.0));
        // skew-symmetric (m^T = -m); the skew-Hermitian variant conjugates the mirror
        let h = parse_matrix_str("0,1+2i\n-1+2i,0").unwrap();
        assert_eq!(h.hermitian_part(), ComplexMatrix::zeros(2));
        assert!(matches!(parse_matrix_str("1,2\n3"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_matrix_str("1,2,3\n4,5,6"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_matrix_str("1, 2\n3, x"),
            Err(Error::Parse { line: 2, column: 4, .. })
        ));
    }

    #[test]
    fn scalar_format_round_trips() {
        for z in [c(1.0, -0.0), c(-1.0 / 3.0, 2e-300), c(0.1, -7.25), c(f64::MAX, f64::MIN_POSITIVE)] {
            let text = format_scalar(z);
            let back = parse_scalar(&text, 1, 1).unwrap();
            assert_eq!(back.re.to_bits(), z.re.to_bits());
            assert_eq!(back.im.abs().to_bits(), z.im.abs().to_bits());
        }
    }

    #[test]
    fn strategy_specs() {
        assert_eq!("row".parse::<StrategySpec>().unwrap(), StrategySpec::Row);
        assert_eq!("col_rev".parse::<StrategySpec>().unwrap(), StrategySpec::ColRev);
        assert_eq!("perm:7".parse::<StrategySpec>().unwrap(), StrategySpec::Perm { seed: Some(7) });
        assert_eq!(
            "sg:3:40".parse::<StrategySpec>().unwrap(),
            StrategySpec::Sg {
                seed: Some(3),
                num_ops: Some(40)
            }
        );
        assert_eq!(
            "file:/tmp/o.txt".parse::<StrategySpec>().unwrap(),
            StrategySpec::File("/tmp/o.txt".into())
        );
        for bad in ["", "rows", "sg:x", "perm:1:2", "file:"] {
            assert!(bad.parse::<StrategySpec>().is_err(), "{bad}");
        }
        for spec in ["row", "col", "row_rev", "col_rev", "perm", "perm:4", "sg", "sg:2", "sg:2:9"] {
            let s: StrategySpec = spec.parse().unwrap();
            assert_eq!(s.label(), spec);
            assert!(s.build(5, 1).unwrap().validate().is_ok());
        }
    }
}
