//! Per-step trace records, CSV exports of convergence curves and log-magnitude
//! snapshots, and detection of the diagonal block structure of a converged
//! iterate.

use std::io::{BufRead, Write};
use std::ops::Range;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::verification::{char_poly, poly_roots, ORACLE_MAX_N};

pub const TRACE_HEADER: &str = "k,sweep,p,q,off_A,off_B,norm_C,fro_A,delta_k,c_pq_abs";

pub const DEFAULT_LOGABS_FLOOR: f64 = 1e-16;

/// Metrics of `A^(k+1)` after step `k`, which used pivot `(p, q)`
/// (0-based here, 1-based in CSV).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    pub sweep: usize,
    pub p: usize,
    pub q: usize,
    pub off_a: f64,
    pub off_b: f64,
    pub norm_c: f64,
    pub fro_a: f64,
    pub delta_k: f64,
    pub c_pq_abs: f64,
}

pub fn export_trace(trace: &[TraceRecord], mut out: impl Write) -> Result<()> {
    if trace.is_empty() {
        return Err(Error::Config("cannot export an empty trace".into()));
    }
    writeln!(out, "{TRACE_HEADER}")?;
    for r in trace {
        writeln!(
            out,
            "{},{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.k,
            r.sweep,
            r.p + 1,
            r.q + 1,
            r.off_a,
            r.off_b,
            r.norm_c,
            r.fro_a,
            r.delta_k,
            r.c_pq_abs
        )?;
    }
    Ok(())
}

pub fn import_trace(input: impl BufRead) -> Result<Vec<TraceRecord>> {
    let mut lines = input.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim() != TRACE_HEADER {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("expected header `{TRACE_HEADER}`"),
        });
    }
    let mut out = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let lineno = idx + 2;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(Error::Parse {
                line: lineno,
                column: 1,
                message: format!("expected 10 fields, found {}", fields.len()),
            });
        }
        let int = |i: usize| -> Result<usize> {
            fields[i].trim().parse().map_err(|_| Error::Parse {
                line: lineno,
                column: i + 1,
                message: format!("bad integer `{}`", fields[i]),
            })
        };
        let float = |i: usize| -> Result<f64> {
            fields[i].trim().parse().map_err(|_| Error::Parse {
                line: lineno,
                column: i + 1,
                message: format!("bad number `{}`", fields[i]),
            })
        };
        let one_based = |i: usize| -> Result<usize> {
            int(i)?.checked_sub(1).ok_or_else(|| Error::Parse {
                line: lineno,
                column: i + 1,
                message: "pivot indices are 1-based".into(),
            })
        };
        out.push(TraceRecord {
            k: int(0)?,
            sweep: int(1)?,
            p: one_based(2)?,
            q: one_based(3)?,
            off_a: float(4)?,
            off_b: float(5)?,
            norm_c: float(6)?,
            fro_a: float(7)?,
            delta_k: float(8)?,
            c_pq_abs: float(9)?,
        });
    }
    Ok(out)
}

/// `n x n` grid of `log10(max(|a_ij|, floor))`.
pub fn export_logabs(a: &ComplexMatrix, floor: f64, mut out: impl Write) -> Result<()> {
    if floor.is_nan() || floor <= 0.0 {
        return Err(Error::Config(format!("logabs floor must be positive, got {floor}")));
    }
    for i in 0..a.n() {
        let row: Vec<String> = a
            .row(i)
            .iter()
            .map(|z| format!("{}", z.norm().max(floor).log10()))
            .collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockDetection {
    /// Consecutive real parts closer than this share a cluster; `None` means
    /// `1e-6 (max μ - min μ + 1)`.
    pub real_gap: Option<f64>,
    /// Entries above `offdiag_tol · ‖Λ‖_F` couple their indices.
    pub offdiag_tol: f64,
    /// The caller promises decreasing real parts; a violation is an error.
    pub sorted: bool,
}

impl Default for BlockDetection {
    fn default() -> Self {
        Self {
            real_gap: None,
            offdiag_tol: 1e-6,
            sorted: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockPartition {
    /// Contiguous, disjoint, covering `0..n`.
    pub ranges: Vec<Range<usize>>,
    /// Mean real part of the diagonal of each block.
    pub mu: Vec<f64>,
    /// Filled by [`BlockPartition::with_eigenvalues`].
    pub block_eigenvalues: Vec<Vec<Complex64>>,
    /// Largest modulus of an entry coupling two different blocks.
    pub max_coupling: f64,
}

impl BlockPartition {
    pub fn sizes(&self) -> Vec<usize> {
        self.ranges.iter().map(|r| r.len()).collect()
    }

    /// Eigenvalues of every diagonal block from the characteristic-polynomial
    /// oracle; `1 x 1` blocks contribute their entry directly.
    pub fn with_eigenvalues(mut self, lambda: &ComplexMatrix) -> Result<Self> {
        self.block_eigenvalues = self
            .ranges
            .iter()
            .map(|r| {
                if r.len() == 1 {
                    Ok(vec![lambda[(r.start, r.start)]])
                } else if r.len() > ORACLE_MAX_N {
                    Err(Error::OracleTooLarge {
                        n: r.len(),
                        max: ORACLE_MAX_N,
                    })
                } else {
                    poly_roots(&char_poly(&lambda.submatrix(r.start, r.end))?)
                }
            })
            .collect::<Result<_>>()?;
        Ok(self)
    }

    pub fn all_eigenvalues(&self) -> Vec<Complex64> {
        self.block_eigenvalues.iter().flatten().copied().collect()
    }
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Splits the diagonal of a (near-)converged iterate into blocks.
///
/// Consecutive indices whose real parts are within `real_gap` form clusters.
/// Inside a cluster two indices share a block only if a chain of significant
/// entries connects them, so a multiple eigenvalue whose couplings have
/// vanished gives singletons. Blocks are then widened to contiguous ranges.
pub fn detect_blocks(lambda: &ComplexMatrix, params: &BlockDetection) -> Result<BlockPartition> {
    let n = lambda.n();
    let mu: Vec<f64> = lambda.diag().iter().map(|z| z.re).collect();
    let (lo, hi) = mu
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &m| (lo.min(m), hi.max(m)));
    let gap = params.real_gap.unwrap_or(1e-6 * (hi - lo + 1.0));
    if params.sorted {
        if let Some(i) = (1..n).find(|&i| mu[i] > mu[i - 1] + gap) {
            return Err(Error::UnsortedDiagonal { index: i });
        }
    }

    let mut clusters: Vec<Range<usize>> = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || (mu[i] - mu[i - 1]).abs() >= gap {
            clusters.push(start..i);
            start = i;
        }
    }

    let threshold = params.offdiag_tol * lambda.frobenius_norm();
    let mut sets = DisjointSet::new(n);
    for c in &clusters {
        for i in c.clone() {
            for j in c.clone() {
                if i < j && (lambda[(i, j)].norm() > threshold || lambda[(j, i)].norm() > threshold) {
                    sets.union(i, j);
                }
            }
        }
    }

    // contiguous closure: a block extends to the last index of its component
    let mut last = vec![0; n];
    for i in 0..n {
        let r = sets.find(i);
        last[r] = last[r].max(i);
    }
    let mut ranges = Vec::new();
    let mut start = 0;
    let mut end = 0;
    for i in 0..n {
        end = end.max(last[sets.find(i)] + 1);
        if i + 1 == end {
            ranges.push(start..end);
            start = end;
        }
    }

    let mut max_coupling: f64 = 0.0;
    for (bi, a) in ranges.iter().enumerate() {
        for b in ranges.iter().skip(bi + 1) {
            for i in a.clone() {
                for j in b.clone() {
                    max_coupling = max_coupling.max(lambda[(i, j)].norm()).max(lambda[(j, i)].norm());
                }
            }
        }
    }

    let block_mu = ranges
        .iter()
        .map(|r| r.clone().map(|i| mu[i]).sum::<f64>() / r.len() as f64)
        .collect();
    Ok(BlockPartition {
        ranges,
        mu: block_mu,
        block_eigenvalues: Vec::new(),
        max_coupling,
    })
}
