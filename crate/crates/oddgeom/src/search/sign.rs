//! Completing a zero pattern into a signed matrix: assign ±1 to every
//! support cell so that all row pairs are orthogonal.
//!
//! The row/column negation group is quotiented out up front ("gauge
//! fixing"): row 1 is pinned all +1 via column negations, and for each
//! column with no entry in row 1 the topmost entry is pinned +1. Any
//! signable pattern has a signing in this normal form, so exhaustion under
//! the gauge proves there is no signing at all.

use std::time::Instant;

use super::{Completion, SearchBudget, SearchError, SearchStats};
use crate::geometry::{full_mask, GeometryError, LineSystem};
use crate::matrix::WeighingMatrix;

/// Columns strictly greater than `c`, as a mask.
fn columns_after(c: usize) -> u64 {
    if c + 1 >= 64 {
        0
    } else {
        !0u64 << (c + 1)
    }
}

/// Checks the pattern against the target order and weight and returns the
/// per-row support masks (complements of the zero-pattern lines).
pub(crate) fn validated_supports(
    ls: &LineSystem,
    n: usize,
    k: usize,
) -> Result<Vec<u64>, SearchError> {
    if n == 0 || k == 0 || k > n {
        return Err(SearchError::Geometry(GeometryError::BadWeight { n, k }));
    }
    if ls.point_count() != n || ls.line_count() != n {
        return Err(SearchError::OrderMismatch {
            v: ls.point_count(),
            b: ls.line_count(),
            n,
        });
    }
    let expected = n - k;
    for (i, &mask) in ls.masks().iter().enumerate() {
        let size = mask.count_ones() as usize;
        if size != expected {
            return Err(SearchError::ZeroSetSizeMismatch {
                line: i + 1,
                size,
                n,
                k,
                expected,
            });
        }
    }
    Ok(ls.masks().iter().map(|&m| full_mask(n) & !m).collect())
}

/// Whether the support cell (row, col) is gauge-pinned to +1: every cell
/// of row 1, and the topmost cell of each column missing from row 1.
pub(crate) fn is_pinned(supports: &[u64], row: usize, col: usize) -> bool {
    debug_assert!(supports[row] >> col & 1 == 1);
    row == 0
        || (supports[0] >> col & 1 == 0 && (0..row).all(|above| supports[above] >> col & 1 == 0))
}

/// Sign-assignment state: a prefix of the support cells (row-major) holds
/// ±1, everything else is still zero, and the running dot products between
/// the row being filled and every earlier row are maintained incrementally.
#[derive(Debug, Clone)]
pub struct PartialSigning {
    n: usize,
    k: usize,
    /// Nonzero columns per row (complements of the zero-pattern lines).
    supports: Vec<u64>,
    /// Support cells in assignment order: row-major, columns ascending.
    cells: Vec<(usize, usize)>,
    /// Gauge-pinned cells (forced +1).
    pinned: Vec<bool>,
    /// Dense n*n grid of current entries.
    entries: Vec<i8>,
    /// dots[r*n + j] = running dot of row r against earlier row j.
    dots: Vec<i64>,
    /// How many cells of `cells` are assigned.
    filled: usize,
}

impl PartialSigning {
    /// Validates the pattern against the target order and weight and sets
    /// up the gauge pins.
    pub fn new(ls: &LineSystem, n: usize, k: usize) -> Result<Self, SearchError> {
        let supports = validated_supports(ls, n, k)?;
        let mut cells = Vec::with_capacity(n * k);
        let mut pinned = Vec::with_capacity(n * k);
        for (row, &support) in supports.iter().enumerate() {
            for col in 0..n {
                if support >> col & 1 == 1 {
                    cells.push((row, col));
                    pinned.push(is_pinned(&supports, row, col));
                }
            }
        }

        Ok(PartialSigning {
            n,
            k,
            supports,
            cells,
            pinned,
            entries: vec![0; n * n],
            dots: vec![0; n * n],
            filled: 0,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn weight(&self) -> usize {
        self.k
    }

    /// Current entry at (row, col), 0-based; unassigned cells read 0.
    pub fn entry(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.n + col]
    }

    /// Rows whose support cells are all assigned.
    pub fn rows_signed(&self) -> usize {
        match self.cells.get(self.filled) {
            Some(&(row, _)) => row,
            None => self.n,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.filled == self.cells.len()
    }

    /// Whether the next cell to assign is gauge-pinned to +1.
    pub fn next_pinned(&self) -> Option<bool> {
        self.pinned.get(self.filled).copied()
    }

    /// Row pairs whose common support has odd size; any such pair makes a
    /// zero dot product impossible, whatever the signs.
    pub fn odd_support_pairs(&self) -> u64 {
        let mut odd = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if (self.supports[i] & self.supports[j]).count_ones() % 2 == 1 {
                    odd += 1;
                }
            }
        }
        odd
    }

    /// Assigns `value` to the next cell and reports whether every running
    /// dot product can still reach zero with the cells left in this row.
    pub(crate) fn assign(&mut self, value: i8) -> bool {
        let (row, col) = self.cells[self.filled];
        self.entries[row * self.n + col] = value;
        self.filled += 1;
        let mut feasible = true;
        for j in 0..row {
            let other = self.entries[j * self.n + col];
            if other != 0 {
                self.dots[row * self.n + j] += (value * other) as i64;
            }
            let rem = (self.supports[row] & self.supports[j] & columns_after(col)).count_ones();
            if self.dots[row * self.n + j].unsigned_abs() > rem as u64 {
                feasible = false;
            }
        }
        feasible
    }

    pub(crate) fn retract(&mut self) {
        debug_assert!(self.filled > 0);
        self.filled -= 1;
        let (row, col) = self.cells[self.filled];
        let value = self.entries[row * self.n + col];
        for j in 0..row {
            let other = self.entries[j * self.n + col];
            if other != 0 {
                self.dots[row * self.n + j] -= (value * other) as i64;
            }
        }
        self.entries[row * self.n + col] = 0;
    }

    /// The fully signed matrix, once complete.
    pub fn to_matrix(&self) -> Option<WeighingMatrix> {
        if !self.is_complete() {
            return None;
        }
        let rows: Vec<Vec<i8>> = (0..self.n)
            .map(|r| self.entries[r * self.n..(r + 1) * self.n].to_vec())
            .collect();
        Some(
            WeighingMatrix::from_rows(self.n, self.k, &rows)
                .expect("assigned entries form a well-shaped matrix"),
        )
    }
}

enum Walk {
    Exhausted,
    Found,
    Stopped(Completion),
}

fn dfs(
    ps: &mut PartialSigning,
    budget: &SearchBudget,
    start: Instant,
    stats: &mut SearchStats,
    found: &mut Option<WeighingMatrix>,
) -> Walk {
    if ps.is_complete() {
        *found = ps.to_matrix();
        stats.solutions_found += 1;
        return Walk::Found;
    }
    let candidates: &[i8] = if ps.next_pinned() == Some(true) {
        &[1]
    } else {
        &[1, -1]
    };
    for &value in candidates {
        if stats.nodes_visited >= budget.max_nodes {
            return Walk::Stopped(Completion::NodeBudget);
        }
        if stats.nodes_visited.is_multiple_of(4096)
            && start.elapsed().as_millis() as u64 > budget.max_seconds.saturating_mul(1000)
        {
            return Walk::Stopped(Completion::TimeBudget);
        }
        stats.nodes_visited += 1;
        if ps.assign(value) {
            stats.deepest_level = stats.deepest_level.max(ps.rows_signed());
            let walk = dfs(ps, budget, start, stats, found);
            ps.retract();
            if !matches!(walk, Walk::Exhausted) {
                return walk;
            }
        } else {
            // A running dot product can no longer reach zero.
            stats.prunes.profile_bound += 1;
            ps.retract();
        }
    }
    Walk::Exhausted
}

/// Searches for ±1 signs turning the zero pattern `ls` into a verified
/// order-`n` weight-`k` matrix. Returns the first signing in gauge normal
/// form, or None with stats saying whether the space was exhausted (no
/// signing exists at all) or the budget ran out.
pub fn sign_search(
    ls: &LineSystem,
    n: usize,
    k: usize,
    budget: &SearchBudget,
) -> Result<(Option<WeighingMatrix>, SearchStats), SearchError> {
    let start = Instant::now();
    let mut ps = PartialSigning::new(ls, n, k)?;
    let mut stats = SearchStats::default();

    // Any row pair sharing an odd number of support columns is a parity
    // obstruction: ±1 entries over an odd count cannot sum to zero.
    let odd_pairs = ps.odd_support_pairs();
    if odd_pairs > 0 {
        stats.prunes.parity = odd_pairs;
        stats.elapsed_ms = start.elapsed().as_millis() as u64;
        return Ok((None, stats));
    }

    let mut found = None;
    let walk = dfs(&mut ps, budget, start, &mut stats, &mut found);
    if let Walk::Stopped(reason) = walk {
        stats.completion = reason;
    }
    stats.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok((found, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::LineSystem;
    use crate::testutil::{fano, i3_pattern};

    #[test]
    fn fano_pattern_signs_into_a_valid_matrix() {
        let ls = fano();
        let (found, stats) = sign_search(&ls, 7, 4, &SearchBudget::generous()).unwrap();
        let m = found.expect("the Fano pattern is signable");
        assert!(m.verify().is_valid());
        assert_eq!(m.zero_pattern().masks(), ls.masks());
        assert!(stats.completion.is_complete());
        assert_eq!(stats.solutions_found, 1);
        assert_eq!(stats.deepest_level, 7);
    }

    #[test]
    fn i3_pattern_signs_into_a_signed_identity() {
        let ls = i3_pattern();
        let (found, stats) = sign_search(&ls, 3, 1, &SearchBudget::generous()).unwrap();
        let m = found.expect("singleton supports are trivially signable");
        assert!(m.verify().is_valid());
        // All three diagonal cells are gauge-pinned, so exactly 3 nodes.
        assert_eq!(stats.nodes_visited, 3);
        for i in 0..3 {
            assert_eq!(m.entry(i, i), 1);
        }
    }

    #[test]
    fn full_support_order_two_gives_the_frozen_pair() {
        let ls = LineSystem::new(2, vec![0, 0]).unwrap();
        let (found, _) = sign_search(&ls, 2, 2, &SearchBudget::generous()).unwrap();
        let m = found.expect("the order-2 full pattern is signable");
        assert_eq!(m.row(0), &[1, 1]);
        assert_eq!(m.row(1), &[1, -1]);
    }

    #[test]
    fn odd_common_support_exhausts_immediately() {
        // Zero sets {1},{1},{2}: rows 1 and 3 share an odd support.
        let ls = LineSystem::from_point_lists(3, &[vec![1], vec![1], vec![2]]).unwrap();
        let (found, stats) = sign_search(&ls, 3, 2, &SearchBudget::generous()).unwrap();
        assert!(found.is_none());
        assert!(stats.completion.is_complete());
        assert_eq!(stats.nodes_visited, 0);
        assert!(stats.prunes.parity > 0);
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        assert!(matches!(
            sign_search(&fano(), 6, 3, &SearchBudget::generous()),
            Err(SearchError::OrderMismatch { v: 7, b: 7, n: 6 })
        ));
        assert!(matches!(
            sign_search(&fano(), 7, 5, &SearchBudget::generous()),
            Err(SearchError::ZeroSetSizeMismatch {
                line: 1,
                size: 3,
                expected: 2,
                ..
            })
        ));
    }

    #[test]
    fn node_budget_stops_the_search() {
        let (found, stats) = sign_search(&fano(), 7, 4, &SearchBudget::new(3, 3_600, 1)).unwrap();
        assert!(found.is_none());
        assert_eq!(stats.completion, Completion::NodeBudget);
        assert_eq!(stats.nodes_visited, 3);
    }

    #[test]
    fn gauge_pins_are_counted_like_other_assignments() {
        let ps = PartialSigning::new(&fano(), 7, 4).unwrap();
        let pins = (0..ps.cells.len()).filter(|&i| ps.pinned[i]).count();
        // Row 1 has 4 support cells; 3 columns miss row 1 and get their
        // topmost entry pinned.
        assert_eq!(pins, 7);
        assert_eq!(ps.cells.len(), 28);
    }

    #[test]
    fn signing_state_reports_progress() {
        let mut ps = PartialSigning::new(&i3_pattern(), 3, 1).unwrap();
        assert_eq!(ps.rows_signed(), 0);
        assert!(!ps.is_complete());
        assert!(ps.assign(1));
        assert_eq!(ps.rows_signed(), 1);
        assert_eq!(ps.entry(0, 0), 1);
        ps.retract();
        assert_eq!(ps.rows_signed(), 0);
        assert_eq!(ps.entry(0, 0), 0);
    }
}
