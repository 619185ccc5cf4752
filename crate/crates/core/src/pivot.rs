//! Cyclic pivot orderings: serial orderings with permutations, the
//! equivalence operations that generate generalized serial orderings, and the
//! cursor that feeds pivots to the solver.
//!
//! Pairs are stored 0-based with `i < j`. The ordering text format and the
//! provenance log are 1-based:
//!
//! ```text
//! 4 6          <- header: n and N = n(n-1)/2
//! 1 2
//! 1 3
//! ...
//! ```
//!
//! A provenance log replays the construction of an ordering:
//!
//! ```text
//! n 4
//! base column          (column | row | column_reversed | row_reversed | explicit)
//! tau 2 1              one line per within-line permutation, in visiting order
//! pair 1 2             only for explicit bases
//! permute 2 1 4 3      vertex permutation, image of 1..n
//! transpose 3          swap positions 3 and 4
//! shift 2
//! reverse
//! ```

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::rng::SeededRng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SerialFamily {
    Column,
    Row,
    ColumnReversed,
    RowReversed,
}

impl SerialFamily {
    pub const ALL: [SerialFamily; 4] = [
        SerialFamily::Column,
        SerialFamily::Row,
        SerialFamily::ColumnReversed,
        SerialFamily::RowReversed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SerialFamily::Column => "column",
            SerialFamily::Row => "row",
            SerialFamily::ColumnReversed => "column_reversed",
            SerialFamily::RowReversed => "row_reversed",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }

    fn is_column(self) -> bool {
        matches!(self, SerialFamily::Column | SerialFamily::ColumnReversed)
    }
}

/// One equivalence operation on an ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderingOp {
    /// Swap the pairs at positions `r` and `r + 1`; they must share no index.
    Transpose(usize),
    /// Move the first `len` pairs to the end.
    Shift(usize),
    /// Relabel every index `i` as `q[i]`.
    Permute(Vec<usize>),
    Reverse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Base {
    Serial {
        family: SerialFamily,
        perms: Vec<Vec<usize>>,
    },
    Explicit {
        pairs: Vec<(usize, usize)>,
    },
}

/// Construction log of an ordering; replaying it reproduces the ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub n: usize,
    pub base: Base,
    pub ops: Vec<OrderingOp>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotOrdering {
    n: usize,
    pairs: Vec<(usize, usize)>,
    provenance: Provenance,
}

/// Why a pair sequence fails to enumerate the strict upper triangle.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrderingViolation {
    /// `(expected, found)`.
    pub wrong_length: Option<(usize, usize)>,
    pub duplicates: Vec<(usize, usize)>,
    pub missing: Vec<(usize, usize)>,
    pub out_of_range: Vec<(usize, usize)>,
}

impl OrderingViolation {
    pub fn is_empty(&self) -> bool {
        self.wrong_length.is_none()
            && self.duplicates.is_empty()
            && self.missing.is_empty()
            && self.out_of_range.is_empty()
    }
}

fn fmt_pairs(pairs: &[(usize, usize)]) -> String {
    pairs
        .iter()
        .map(|(i, j)| format!("({},{})", i + 1, j + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for OrderingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some((expected, found)) = self.wrong_length {
            parts.push(format!("wrong length: expected {expected}, found {found}"));
        }
        if !self.out_of_range.is_empty() {
            parts.push(format!("out of range: {}", fmt_pairs(&self.out_of_range)));
        }
        if !self.duplicates.is_empty() {
            parts.push(format!("duplicate: {}", fmt_pairs(&self.duplicates)));
        }
        if !self.missing.is_empty() {
            parts.push(format!("missing: {}", fmt_pairs(&self.missing)));
        }
        write!(f, "{}", parts.join("; "))
    }
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Checks that `pairs` is a permutation of `{(i, j) : 0 <= i < j < n}`.
/// Pairs given as `(j, i)` are reported out of range.
pub fn validate_pairs(n: usize, pairs: &[(usize, usize)]) -> std::result::Result<(), OrderingViolation> {
    let total = pair_count(n);
    let mut report = OrderingViolation::default();
    if pairs.len() != total {
        report.wrong_length = Some((total, pairs.len()));
    }
    let mut seen = HashSet::new();
    for &(i, j) in pairs {
        if i >= j || j >= n {
            report.out_of_range.push((i, j));
        } else if !seen.insert((i, j)) && !report.duplicates.contains(&(i, j)) {
            report.duplicates.push((i, j));
        }
    }
    for j in 1..n {
        for i in 0..j {
            if !seen.contains(&(i, j)) {
                report.missing.push((i, j));
            }
        }
    }
    if report.is_empty() {
        Ok(())
    } else {
        Err(report)
    }
}

fn check_perm(values: &[usize], expected: impl Iterator<Item = usize>, what: &str) -> Result<()> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let want: Vec<usize> = expected.collect();
    if sorted != want {
        let shown: Vec<usize> = values.iter().map(|v| v + 1).collect();
        let range = match (want.first(), want.last()) {
            (Some(a), Some(b)) => format!("{}..{}", a + 1, b + 1),
            _ => "empty".into(),
        };
        return Err(Error::InvalidPermutation(format!(
            "{what}: {shown:?} is not a permutation of {range}"
        )));
    }
    Ok(())
}

fn serial_pairs(n: usize, family: SerialFamily, perms: &[Vec<usize>]) -> Result<Vec<(usize, usize)>> {
    if n < 2 {
        return Err(Error::Shape { rows: n, cols: n, min: 2 });
    }
    let lines = n - 2;
    if !perms.is_empty() && perms.len() != lines {
        return Err(Error::InvalidPermutation(format!(
            "expected {lines} permutations for n = {n}, got {}",
            perms.len()
        )));
    }
    let mut pairs = Vec::with_capacity(pair_count(n));
    if family.is_column() {
        // column j visits rows tau_j(0..j); column 1 has the single pair (0, 1)
        pairs.push((0, 1));
        for j in 2..n {
            if perms.is_empty() {
                pairs.extend((0..j).map(|i| (i, j)));
            } else {
                let tau = &perms[j - 2];
                check_perm(tau, 0..j, &format!("column {}", j + 1))?;
                pairs.extend(tau.iter().map(|&i| (i, j)));
            }
        }
    } else {
        // rows bottom-up; row n-2 has the single pair (n-2, n-1)
        pairs.push((n - 2, n - 1));
        for i in (0..n - 2).rev() {
            if perms.is_empty() {
                pairs.extend((i + 1..n).map(|j| (i, j)));
            } else {
                let tau = &perms[i];
                check_perm(tau, i + 1..n, &format!("row {}", i + 1))?;
                pairs.extend(tau.iter().map(|&j| (i, j)));
            }
        }
    }
    if matches!(family, SerialFamily::ColumnReversed | SerialFamily::RowReversed) {
        pairs.reverse();
    }
    Ok(pairs)
}

fn disjoint(a: (usize, usize), b: (usize, usize)) -> bool {
    a.0 != b.0 && a.0 != b.1 && a.1 != b.0 && a.1 != b.1
}

fn apply_op(n: usize, pairs: &mut [(usize, usize)], op: &OrderingOp) -> Result<()> {
    match op {
        OrderingOp::Transpose(r) => {
            let r = *r;
            if r + 1 >= pairs.len() {
                return Err(Error::Config(format!(
                    "transposition position {} out of range for {} pairs",
                    r + 1,
                    pairs.len()
                )));
            }
            if !disjoint(pairs[r], pairs[r + 1]) {
                return Err(Error::NotAdmissible {
                    position: r + 1,
                    first: (pairs[r].0 + 1, pairs[r].1 + 1),
                    second: (pairs[r + 1].0 + 1, pairs[r + 1].1 + 1),
                });
            }
            pairs.swap(r, r + 1);
        }
        OrderingOp::Shift(len) => {
            if *len > pairs.len() {
                return Err(Error::ShiftTooLong {
                    len: *len,
                    total: pairs.len(),
                });
            }
            pairs.rotate_left(*len);
        }
        OrderingOp::Permute(q) => {
            if q.len() != n {
                return Err(Error::InvalidPermutation(format!(
                    "vertex permutation has length {}, expected {n}",
                    q.len()
                )));
            }
            check_perm(q, 0..n, "vertex permutation")?;
            for pair in pairs.iter_mut() {
                let (a, b) = (q[pair.0], q[pair.1]);
                *pair = (a.min(b), a.max(b));
            }
        }
        OrderingOp::Reverse => pairs.reverse(),
    }
    Ok(())
}

impl PivotOrdering {
    /// Serial ordering from one of the four families. `perms` is either empty
    /// (identity) or holds `n - 2` visiting orders: for columns `j = 2..n-1`
    /// a permutation of `0..j`, for rows `i = 0..n-3` a permutation of
    /// `i+1..n`.
    pub fn serial(n: usize, family: SerialFamily, perms: Vec<Vec<usize>>) -> Result<Self> {
        let pairs = serial_pairs(n, family, &perms)?;
        Ok(Self {
            n,
            pairs,
            provenance: Provenance {
                n,
                base: Base::Serial { family, perms },
                ops: Vec::new(),
            },
        })
    }

    pub fn column(n: usize) -> Result<Self> {
        Self::serial(n, SerialFamily::Column, Vec::new())
    }

    pub fn row(n: usize) -> Result<Self> {
        Self::serial(n, SerialFamily::Row, Vec::new())
    }

    /// An arbitrary ordering; rejected unless it covers the upper triangle
    /// exactly once.
    pub fn from_pairs(n: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Shape { rows: n, cols: n, min: 2 });
        }
        validate_pairs(n, &pairs).map_err(Error::InvalidOrdering)?;
        Ok(Self {
            n,
            pairs: pairs.clone(),
            provenance: Provenance {
                n,
                base: Base::Explicit { pairs },
                ops: Vec::new(),
            },
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn validate(&self) -> std::result::Result<(), OrderingViolation> {
        validate_pairs(self.n, &self.pairs)
    }

    pub fn transform(&self, op: OrderingOp) -> Result<Self> {
        let mut pairs = self.pairs.clone();
        apply_op(self.n, &mut pairs, &op)?;
        let mut provenance = self.provenance.clone();
        provenance.ops.push(op);
        Ok(Self {
            n: self.n,
            pairs,
            provenance,
        })
    }

    /// Whether positions `r` and `r + 1` may be swapped.
    pub fn is_admissible(&self, r: usize) -> bool {
        r + 1 < self.pairs.len() && disjoint(self.pairs[r], self.pairs[r + 1])
    }

    /// Header `n N` followed by one 1-based `i j` line per pair.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.pairs.len());
        for (i, j) in &self.pairs {
            out.push_str(&format!("{} {}\n", i + 1, j + 1));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, 1, "empty ordering file"))?;
        let nums = parse_ints(header, hline + 1)?;
        let [n, count] = nums[..] else {
            return Err(parse_err(hline + 1, 1, "header must be `n N`"));
        };
        if count != pair_count(n) {
            return Err(parse_err(
                hline + 1,
                1,
                &format!("header N = {count} does not equal n(n-1)/2 = {}", pair_count(n)),
            ));
        }
        let mut pairs = Vec::with_capacity(count);
        for (idx, line) in lines {
            pairs.push(parse_pair(line, idx + 1)?);
        }
        Self::from_pairs(n, pairs)
    }
}

fn parse_err(line: usize, column: usize, message: &str) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_ints(text: &str, line: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    let mut col = 1;
    for tok in text.split_whitespace() {
        let offset = text[col - 1..].find(tok).map_or(col, |o| col + o);
        out.push(
            tok.parse::<usize>()
                .map_err(|_| parse_err(line, offset, &format!("expected an integer, found `{tok}`")))?,
        );
        col = offset + tok.len();
    }
    Ok(out)
}

/// 1-based indices in text, 0-based result.
fn to_zero_based(values: Vec<usize>, line: usize) -> Result<Vec<usize>> {
    values
        .into_iter()
        .map(|v| v.checked_sub(1).ok_or_else(|| parse_err(line, 1, "indices are 1-based")))
        .collect()
}

fn parse_pair(text: &str, line: usize) -> Result<(usize, usize)> {
    let v = to_zero_based(parse_ints(text, line)?, line)?;
    match v[..] {
        [i, j] => Ok((i, j)),
        _ => Err(parse_err(line, 1, "expected a pair `i j`")),
    }
}

fn join_one_based(values: &[usize]) -> String {
    values.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" ")
}

impl Provenance {
    pub fn replay(&self) -> Result<PivotOrdering> {
        let mut ordering = match &self.base {
            Base::Serial { family, perms } => PivotOrdering::serial(self.n, *family, perms.clone())?,
            Base::Explicit { pairs } => PivotOrdering::from_pairs(self.n, pairs.clone())?,
        };
        for op in &self.ops {
            ordering = ordering.transform(op.clone())?;
        }
        Ok(ordering)
    }

    /// Number of non-trivial shifts in the chain, an upper bound on the
    /// number of shift-equivalences separating the ordering from its base.
    pub fn shift_count(&self) -> usize {
        let total = pair_count(self.n);
        self.ops
            .iter()
            .filter(|op| matches!(op, OrderingOp::Shift(len) if *len != 0 && *len != total))
            .count()
    }

    /// One-line human summary, e.g. `column + permute + 12 ops`.
    pub fn describe(&self) -> String {
        let base = match &self.base {
            Base::Serial { family, perms } if perms.is_empty() => family.name().to_string(),
            Base::Serial { family, .. } => format!("{} with permutations", family.name()),
            Base::Explicit { .. } => "explicit".into(),
        };
        if self.ops.is_empty() {
            base
        } else {
            format!("{base} + {} ops", self.ops.len())
        }
    }

    pub fn to_log(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        match &self.base {
            Base::Serial { family, perms } => {
                out.push_str(&format!("base {}\n", family.name()));
                for tau in perms {
                    out.push_str(&format!("tau {}\n", join_one_based(tau)));
                }
            }
            Base::Explicit { pairs } => {
                out.push_str("base explicit\n");
                for (i, j) in pairs {
                    out.push_str(&format!("pair {} {}\n", i + 1, j + 1));
                }
            }
        }
        for op in &self.ops {
            match op {
                OrderingOp::Transpose(r) => out.push_str(&format!("transpose {}\n", r + 1)),
                OrderingOp::Shift(len) => out.push_str(&format!("shift {len}\n")),
                OrderingOp::Permute(q) => out.push_str(&format!("permute {}\n", join_one_based(q))),
                OrderingOp::Reverse => out.push_str("reverse\n"),
            }
        }
        out
    }

    pub fn from_log(text: &str) -> Result<Self> {
        let mut n = None;
        let mut family = None;
        let mut explicit = false;
        let mut perms = Vec::new();
        let mut pairs = Vec::new();
        let mut ops = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let raw = raw.trim();
            if raw.is_empty() {
                continue;
            }
            let (key, rest) = raw.split_once(' ').unwrap_or((raw, ""));
            match key {
                "n" => n = Some(single(parse_ints(rest, line)?, line)?),
                "base" if rest == "explicit" => explicit = true,
                "base" => {
                    family = Some(
                        SerialFamily::parse(rest)
                            .ok_or_else(|| parse_err(line, 6, &format!("unknown family `{rest}`")))?,
                    )
                }
                "tau" => perms.push(to_zero_based(parse_ints(rest, line)?, line)?),
                "pair" => pairs.push(parse_pair(rest, line)?),
                "permute" => ops.push(OrderingOp::Permute(to_zero_based(parse_ints(rest, line)?, line)?)),
                "transpose" => {
                    let r = single(parse_ints(rest, line)?, line)?;
                    let r = r.checked_sub(1).ok_or_else(|| parse_err(line, 11, "positions are 1-based"))?;
                    ops.push(OrderingOp::Transpose(r));
                }
                "shift" => ops.push(OrderingOp::Shift(single(parse_ints(rest, line)?, line)?)),
                "reverse" => ops.push(OrderingOp::Reverse),
                other => return Err(parse_err(line, 1, &format!("unknown log entry `{other}`"))),
            }
        }
        let n = n.ok_or_else(|| parse_err(1, 1, "missing `n` line"))?;
        let base = match (family, explicit) {
            (Some(family), false) => Base::Serial { family, perms },
            (None, true) => Base::Explicit { pairs },
            _ => return Err(parse_err(1, 1, "exactly one `base` line required")),
        };
        Ok(Self { n, base, ops })
    }
}

fn single(v: Vec<usize>, line: usize) -> Result<usize> {
    match v[..] {
        [x] => Ok(x),
        _ => Err(parse_err(line, 1, "expected a single integer")),
    }
}

fn random_serial_with(rng: &mut SeededRng, n: usize) -> Result<PivotOrdering> {
    let family = SerialFamily::ALL[rng.below(4)];
    let perms: Vec<Vec<usize>> = if family.is_column() {
        (2..n)
            .map(|j| {
                let mut tau: Vec<usize> = (0..j).collect();
                rng.shuffle(&mut tau);
                tau
            })
            .collect()
    } else {
        (0..n.saturating_sub(2))
            .map(|i| {
                let mut tau: Vec<usize> = (i + 1..n).collect();
                rng.shuffle(&mut tau);
                tau
            })
            .collect()
    };
    PivotOrdering::serial(n, family, perms)
}

/// Serial ordering with a random family and random within-line permutations.
pub fn random_serial_ordering(n: usize, seed: u64) -> Result<PivotOrdering> {
    random_serial_with(&mut SeededRng::new(seed), n)
}

/// Samples a generalized serial ordering: random serial base with random
/// within-line permutations, a random vertex permutation, then `num_ops`
/// (default `4N`) random shifts and admissible transpositions.
pub fn random_sg_ordering(n: usize, seed: u64, num_ops: Option<usize>) -> Result<PivotOrdering> {
    if n < 2 {
        return Err(Error::Shape { rows: n, cols: n, min: 2 });
    }
    let total = pair_count(n);
    let num_ops = num_ops.unwrap_or(4 * total);
    let mut rng = SeededRng::new(seed);
    let mut ordering = random_serial_with(&mut rng, n)?;
    ordering = ordering.transform(OrderingOp::Permute(rng.permutation(n)))?;
    for _ in 0..num_ops {
        let admissible: Vec<usize> = (0..total.saturating_sub(1)).filter(|&r| ordering.is_admissible(r)).collect();
        let op = if admissible.is_empty() || rng.below(2) == 0 {
            OrderingOp::Shift(rng.below(total + 1))
        } else {
            OrderingOp::Transpose(admissible[rng.below(admissible.len())])
        };
        ordering = ordering.transform(op)?;
    }
    Ok(ordering)
}

/// Cyclic pivot source with period `N`.
#[derive(Clone, Debug)]
pub struct PivotCursor {
    ordering: PivotOrdering,
    k: usize,
}

impl PivotCursor {
    pub fn new(ordering: PivotOrdering) -> Self {
        Self { ordering, k: 0 }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ordering(&self) -> &PivotOrdering {
        &self.ordering
    }

    /// The pair for the current step; does not advance.
    pub fn peek(&self) -> (usize, usize) {
        self.ordering.pairs[self.k % self.ordering.len()]
    }

    pub fn next_pivot(&mut self) -> (usize, usize) {
        let pair = self.peek();
        self.k += 1;
        pair
    }
}
