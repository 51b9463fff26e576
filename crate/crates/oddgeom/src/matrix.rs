//! Square {0, +1, -1} matrices with a claimed weight, their verification,
//! and the text format used to move them between tools.
//!
//! A `WeighingMatrix` only guarantees shape and entry range. Row weight and
//! pairwise row orthogonality are *checked*, not enforced, so the type can
//! hold candidate and deliberately broken matrices.

use std::fmt;

use crate::geometry::LineSystem;

/// Largest supported order. Lines are stored as 64-bit masks downstream.
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("order {0} is out of range (1..={MAX_ORDER})")]
    BadOrder(usize),
    #[error("weight {k} is out of range for order {n}")]
    BadWeight { n: usize, k: usize },
    #[error("expected {expected} rows, got {got}")]
    WrongRowCount { expected: usize, got: usize },
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("entry ({row},{col}) = {value} is not in {{-1, 0, +1}}")]
    BadEntry { row: usize, col: usize, value: i8 },
    #[error("permutation is not a bijection on 1..={0}")]
    BadPermutation(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: expected header `W <n> <k>`")]
    BadHeader { line: usize },
    #[error("line {line}: bad token `{token}` (expected +, -, 0, 1, or -1)")]
    BadToken { line: usize, token: String },
    #[error("line {line}: row has {got} tokens, expected {expected}")]
    RaggedRow {
        line: usize,
        expected: usize,
        got: usize,
    },
    #[error("header claims {expected} rows, body has {got}")]
    RowCountMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Invalid(#[from] MatrixError),
}

/// An n-by-n matrix over {-1, 0, +1} with a claimed weight `k`.
///
/// Entries are validated at construction; everything else (row weight,
/// orthogonality) is reported by [`WeighingMatrix::verify`].
#[derive(Clone, PartialEq, Eq)]
pub struct WeighingMatrix {
    n: usize,
    k: usize,
    /// Row-major, length n*n.
    entries: Vec<i8>,
}

impl fmt::Debug for WeighingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeighingMatrix(n={}, k={})", self.n, self.k)
    }
}

impl WeighingMatrix {
    /// Builds a matrix from rows, validating shape and entry range only.
    pub fn from_rows(n: usize, k: usize, rows: &[Vec<i8>]) -> Result<Self, MatrixError> {
        if n == 0 || n > MAX_ORDER {
            return Err(MatrixError::BadOrder(n));
        }
        if k == 0 || k > n {
            return Err(MatrixError::BadWeight { n, k });
        }
        if rows.len() != n {
            return Err(MatrixError::WrongRowCount {
                expected: n,
                got: rows.len(),
            });
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::RaggedRow {
                    row: i + 1,
                    expected: n,
                    got: row.len(),
                });
            }
            for (j, &e) in row.iter().enumerate() {
                if !(-1..=1).contains(&e) {
                    return Err(MatrixError::BadEntry {
                        row: i + 1,
                        col: j + 1,
                        value: e,
                    });
                }
                entries.push(e);
            }
        }
        Ok(WeighingMatrix { n, k, entries })
    }

    /// The identity matrix, a valid W(n,1).
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0i8; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        WeighingMatrix { n, k: 1, entries }
    }

    /// Circulant matrix whose row i is `first_row` cyclically shifted i
    /// places to the right. Weight is taken from the nonzero count of
    /// `first_row`.
    pub fn circulant(first_row: &[i8]) -> Result<Self, MatrixError> {
        let n = first_row.len();
        let k = first_row.iter().filter(|&&e| e != 0).count();
        let rows: Vec<Vec<i8>> = (0..n)
            .map(|i| (0..n).map(|j| first_row[(n + j - i) % n]).collect())
            .collect();
        Self::from_rows(n, k, &rows)
    }

    /// Block-diagonal sum. The claimed weight must agree between the parts.
    pub fn direct_sum(a: &Self, b: &Self) -> Result<Self, MatrixError> {
        if a.k != b.k {
            return Err(MatrixError::BadWeight { n: a.n + b.n, k: b.k });
        }
        let n = a.n + b.n;
        let mut rows = vec![vec![0i8; n]; n];
        for (i, row) in rows.iter_mut().take(a.n).enumerate() {
            row[..a.n].copy_from_slice(a.row(i));
        }
        for (i, row) in rows.iter_mut().skip(a.n).enumerate() {
            row[a.n..].copy_from_slice(b.row(i));
        }
        Self::from_rows(n, a.k, &rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Entry at 0-based (row, col).
    pub fn entry(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.n + col]
    }

    /// 0-based row slice.
    pub fn row(&self, row: usize) -> &[i8] {
        &self.entries[row * self.n..(row + 1) * self.n]
    }

    fn row_dot(&self, i: usize, j: usize) -> i64 {
        self.row(i)
            .iter()
            .zip(self.row(j))
            .map(|(&a, &b)| a as i64 * b as i64)
            .sum()
    }

    /// Checks row weights and pairwise row orthogonality.
    ///
    /// Rows suffice: for a square matrix, W.W^T = k.I implies the column
    /// conditions, so they are not re-checked here.
    pub fn verify(&self) -> VerificationReport {
        let mut report = VerificationReport::default();
        for (idx, &e) in self.entries.iter().enumerate() {
            if !(-1..=1).contains(&e) {
                report
                    .entry_violations
                    .push((idx / self.n + 1, idx % self.n + 1));
            }
        }
        for i in 0..self.n {
            let weight = self.row(i).iter().filter(|&&e| e != 0).count();
            if weight != self.k {
                report.weight_violations.push((i + 1, weight));
            }
        }
        for i in 0..self.n {
            for j in i + 1..self.n {
                let dot = self.row_dot(i, j);
                if dot != 0 {
                    report.orthogonality_violations.push((i + 1, j + 1, dot));
                }
            }
        }
        report
    }

    pub fn transpose(&self) -> WeighingMatrix {
        let n = self.n;
        let mut entries = vec![0i8; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j];
            }
        }
        WeighingMatrix { n, k: self.k, entries }
    }

    /// Line system of per-row zero positions: line i = { j : entry(i,j) = 0 },
    /// points 1..=n.
    pub fn zero_pattern(&self) -> LineSystem {
        let lines: Vec<u64> = (0..self.n)
            .map(|i| {
                let mut mask = 0u64;
                for j in 0..self.n {
                    if self.entry(i, j) == 0 {
                        mask |= 1 << j;
                    }
                }
                mask
            })
            .collect();
        LineSystem::new(self.n, lines).expect("rows fit in the point range by construction")
    }

    pub fn negate_row(&mut self, row: usize) {
        for j in 0..self.n {
            self.entries[row * self.n + j] *= -1;
        }
    }

    pub fn negate_col(&mut self, col: usize) {
        for i in 0..self.n {
            self.entries[i * self.n + col] *= -1;
        }
    }

    /// Reorders rows so that new row i is old row `perm[i]` (0-based).
    pub fn permute_rows(&mut self, perm: &[usize]) -> Result<(), MatrixError> {
        check_permutation(perm, self.n)?;
        let old = self.entries.clone();
        for (i, &src) in perm.iter().enumerate() {
            self.entries[i * self.n..(i + 1) * self.n]
                .copy_from_slice(&old[src * self.n..(src + 1) * self.n]);
        }
        Ok(())
    }

    /// Reorders columns so that new column j is old column `perm[j]` (0-based).
    pub fn permute_cols(&mut self, perm: &[usize]) -> Result<(), MatrixError> {
        check_permutation(perm, self.n)?;
        let old = self.entries.clone();
        for i in 0..self.n {
            for (j, &src) in perm.iter().enumerate() {
                self.entries[i * self.n + j] = old[i * self.n + src];
            }
        }
        Ok(())
    }

    /// Parses the `W <n> <k>` text format. `#` starts a comment line;
    /// tokens are `+`, `-`, `0` with input aliases `1` and `-1`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut content = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_line, header) = content.next().ok_or(ParseError::BadHeader { line: 1 })?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("W") {
            return Err(ParseError::BadHeader { line: header_line });
        }
        let n: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or(ParseError::BadHeader { line: header_line })?;
        let k: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or(ParseError::BadHeader { line: header_line })?;
        if parts.next().is_some() {
            return Err(ParseError::BadHeader { line: header_line });
        }

        let mut rows: Vec<Vec<i8>> = Vec::with_capacity(n);
        for (line_no, line) in content {
            if rows.len() == n {
                return Err(ParseError::RowCountMismatch {
                    expected: n,
                    got: n + 1,
                });
            }
            let mut row = Vec::with_capacity(n);
            for token in line.split_whitespace() {
                let e = match token {
                    "+" | "1" => 1,
                    "-" | "-1" => -1,
                    "0" => 0,
                    _ => {
                        return Err(ParseError::BadToken {
                            line: line_no,
                            token: token.to_string(),
                        })
                    }
                };
                row.push(e);
            }
            if row.len() != n {
                return Err(ParseError::RaggedRow {
                    line: line_no,
                    expected: n,
                    got: row.len(),
                });
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(ParseError::RowCountMismatch {
                expected: n,
                got: rows.len(),
            });
        }
        Ok(Self::from_rows(n, k, &rows)?)
    }

    /// Canonical text form: header, then rows of `+`/`-`/`0` separated by
    /// single spaces, one trailing newline per line, no trailing spaces.
    pub fn to_text(&self) -> String {
        let mut out = format!("W {} {}\n", self.n, self.k);
        for i in 0..self.n {
            let row: Vec<&str> = self
                .row(i)
                .iter()
                .map(|&e| match e {
                    1 => "+",
                    -1 => "-",
                    _ => "0",
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<(), MatrixError> {
    if perm.len() != n {
        return Err(MatrixError::BadPermutation(n));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(MatrixError::BadPermutation(n));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Outcome of [`WeighingMatrix::verify`]. All positions are 1-based.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    /// (row, col) of entries outside {-1, 0, +1}. Empty for matrices built
    /// through the validated constructors.
    pub entry_violations: Vec<(usize, usize)>,
    /// (row, actual nonzero count) for rows whose weight differs from k.
    pub weight_violations: Vec<(usize, usize)>,
    /// (row i, row j, dot product) for non-orthogonal row pairs, i < j.
    pub orthogonality_violations: Vec<(usize, usize, i64)>,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.entry_violations.is_empty()
            && self.weight_violations.is_empty()
            && self.orthogonality_violations.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "valid = {}", self.is_valid())?;
        for &(r, c) in &self.entry_violations {
            writeln!(f, "entry_violation: entry ({r},{c}) outside {{-1,0,+1}}")?;
        }
        for &(r, w) in &self.weight_violations {
            writeln!(f, "weight_violation: row {r} has {w} nonzero entries")?;
        }
        for &(i, j, d) in &self.orthogonality_violations {
            writeln!(f, "orthogonality_violation: rows {i} and {j} have dot product {d}")?;
        }
        Ok(())
    }
}
