//! Budgeted exhaustive search: enumerate candidate line systems by
//! backtracking over bitmask lines, complete a system into a signed matrix,
//! and export the signing problem as DIMACS CNF.
//!
//! Every search here is budgeted — there is no unbounded mode. A run ends
//! either complete (the space was exhausted) or truncated by the node
//! budget, the wall clock, or the emit limit, and the stats always say
//! which.

pub mod canonical;
pub mod cnf;
pub mod enumerate;
pub mod sign;

use std::fmt;

pub use canonical::{are_isomorphic, canonical_key};
pub use cnf::{decode_model, encode_cnf, export_cnf, CnfEncoding, CnfError, DecodeError, VarMap};
pub use enumerate::{
    enumerate_geometries, prune_partial, read_frontier, write_frontier, EnumerationRun,
    FrontierError, GeometrySearch, PartialGeometry,
};
pub use sign::{sign_search, PartialSigning};

use crate::geometry::{GeometryError, OddGeometryParams};
use crate::matrix::WeighingMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("geometry has {b} lines over {v} points, but the target order is {n}")]
    OrderMismatch { v: usize, b: usize, n: usize },
    #[error("line {line} has size {size}; order {n} weight {k} needs zero sets of size {expected}")]
    ZeroSetSizeMismatch {
        line: usize,
        size: usize,
        n: usize,
        k: usize,
        expected: usize,
    },
    #[error("{got} lines exceed the target line count {b}")]
    TooManyLines { got: usize, b: usize },
    #[error("line {line} has size {size}, expected {r}")]
    WrongLineSize { line: usize, size: usize, r: usize },
    #[error("placed line masks must be numerically nondecreasing (line {line})")]
    NotSorted { line: usize },
}

/// Hard limits for one search run. Exhausting any limit terminates the run
/// cleanly with the reason recorded in [`SearchStats::completion`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_seconds: u64,
    pub threads: usize,
}

impl SearchBudget {
    pub fn new(max_nodes: u64, max_seconds: u64, threads: usize) -> Self {
        SearchBudget {
            max_nodes: max_nodes.max(1),
            max_seconds: max_seconds.max(1),
            threads: threads.max(1),
        }
    }

    /// A budget ample for every desk-scale instance in the test suite.
    pub fn generous() -> Self {
        SearchBudget::new(100_000_000, 3_600, 1)
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget::new(1_000_000, 3_600, 1)
    }
}

/// Per-rule tallies of rejected candidates.
///
/// `parity` counts intersection sizes outside the allowed set (for valid
/// parameters that set is one parity class, hence the name). In the sign
/// search, `parity` counts odd common supports and `profile_bound` counts
/// partial dot products that can no longer reach zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PruneCounts {
    pub parity: u64,
    pub profile_bound: u64,
    pub point_degree: u64,
    pub codegree: u64,
    pub symmetry: u64,
}

impl PruneCounts {
    pub fn total(&self) -> u64 {
        self.parity + self.profile_bound + self.point_degree + self.codegree + self.symmetry
    }

    pub fn merge(&mut self, other: &PruneCounts) {
        self.parity += other.parity;
        self.profile_bound += other.profile_bound;
        self.point_degree += other.point_degree;
        self.codegree += other.codegree;
        self.symmetry += other.symmetry;
    }
}

/// How a run ended, ordered by severity for merging.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Completion {
    /// The search space was exhausted.
    Complete,
    /// Stopped after emitting the requested number of solutions.
    EmitLimit,
    /// Stopped by the node budget.
    NodeBudget,
    /// Stopped by the wall-clock budget.
    TimeBudget,
}

impl Completion {
    pub fn is_complete(&self) -> bool {
        *self == Completion::Complete
    }
}

impl fmt::Display for Completion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Completion::Complete => "complete",
            Completion::EmitLimit => "emit-limit",
            Completion::NodeBudget => "node-budget",
            Completion::TimeBudget => "time-budget",
        };
        f.write_str(s)
    }
}

/// Counters for one run. All counters are exact; merging two stats adds
/// the counters, takes the deeper level and later clock, and keeps the
/// more severe completion, so per-thread stats fold into a run total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchStats {
    /// Candidate evaluations (line candidates or sign assignments tried).
    pub nodes_visited: u64,
    pub solutions_found: u64,
    /// Deepest search level reached (lines placed or rows fully signed).
    pub deepest_level: usize,
    pub prunes: PruneCounts,
    pub elapsed_ms: u64,
    pub completion: Completion,
}

impl Default for SearchStats {
    fn default() -> Self {
        SearchStats {
            nodes_visited: 0,
            solutions_found: 0,
            deepest_level: 0,
            prunes: PruneCounts::default(),
            elapsed_ms: 0,
            completion: Completion::Complete,
        }
    }
}

impl SearchStats {
    pub fn merge(&mut self, other: &SearchStats) {
        self.nodes_visited += other.nodes_visited;
        self.solutions_found += other.solutions_found;
        self.deepest_level = self.deepest_level.max(other.deepest_level);
        self.prunes.merge(&other.prunes);
        self.elapsed_ms = self.elapsed_ms.max(other.elapsed_ms);
        self.completion = self.completion.max(other.completion);
    }

    /// Equality of everything except the wall clock; repeated
    /// single-threaded runs must agree on this.
    pub fn same_counters(&self, other: &SearchStats) -> bool {
        self.nodes_visited == other.nodes_visited
            && self.solutions_found == other.solutions_found
            && self.deepest_level == other.deepest_level
            && self.prunes == other.prunes
            && self.completion == other.completion
    }
}

impl fmt::Display for SearchStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nodes_visited = {}", self.nodes_visited)?;
        writeln!(f, "solutions_found = {}", self.solutions_found)?;
        writeln!(f, "deepest_level = {}", self.deepest_level)?;
        writeln!(f, "prune_parity = {}", self.prunes.parity)?;
        writeln!(f, "prune_profile_bound = {}", self.prunes.profile_bound)?;
        writeln!(f, "prune_point_degree = {}", self.prunes.point_degree)?;
        writeln!(f, "prune_codegree = {}", self.prunes.codegree)?;
        writeln!(f, "prune_symmetry = {}", self.prunes.symmetry)?;
        writeln!(f, "completion = {}", self.completion)?;
        writeln!(f, "elapsed_ms = {}", self.elapsed_ms)?;
        Ok(())
    }
}

/// How many candidate systems the full pipeline signs before giving up.
/// Hitting this cap downgrades an otherwise complete run to `EmitLimit`.
const PIPELINE_EMIT_LIMIT: usize = 256;

/// Full pipeline for one order/weight target: enumerate candidate zero
/// patterns, then try to sign each into a verified matrix. The budget is
/// shared across both phases and the returned stats aggregate them.
pub fn search_weighing(
    n: usize,
    k: usize,
    budget: &SearchBudget,
) -> Result<(Option<WeighingMatrix>, SearchStats), GeometryError> {
    let params = OddGeometryParams::for_weighing(n, k)?;
    let (systems, mut stats) =
        enumerate_geometries(&params, budget, PIPELINE_EMIT_LIMIT);

    for ls in &systems {
        let remaining = SearchBudget {
            max_nodes: budget.max_nodes.saturating_sub(stats.nodes_visited).max(1),
            max_seconds: budget
                .max_seconds
                .saturating_sub(stats.elapsed_ms / 1000)
                .max(1),
            threads: 1,
        };
        if stats.nodes_visited >= budget.max_nodes {
            stats.completion = stats.completion.max(Completion::NodeBudget);
            break;
        }
        let (found, sign_stats) =
            sign_search(ls, n, k, &remaining).expect("enumerated systems match the target shape");
        stats.merge(&sign_stats);
        if let Some(matrix) = found {
            return Ok((Some(matrix), stats));
        }
    }
    Ok((None, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn completion_merging_keeps_the_worst() {
        assert!(Completion::Complete < Completion::EmitLimit);
        assert!(Completion::EmitLimit < Completion::NodeBudget);
        assert!(Completion::NodeBudget < Completion::TimeBudget);
        let mut a = SearchStats::default();
        let b = SearchStats {
            completion: Completion::NodeBudget,
            nodes_visited: 5,
            deepest_level: 3,
            ..SearchStats::default()
        };
        a.merge(&b);
        assert_eq!(a.completion, Completion::NodeBudget);
        assert_eq!(a.nodes_visited, 5);
        assert_eq!(a.deepest_level, 3);
    }

    #[test]
    fn stats_display_is_key_value() {
        let stats = SearchStats::default();
        let text = stats.to_string();
        assert!(text.starts_with("nodes_visited = 0\n"));
        assert!(text.contains("prune_symmetry = 0\n"));
        assert!(text.contains("completion = complete\n"));
    }

    #[test]
    fn same_counters_ignores_elapsed() {
        let mut a = SearchStats::default();
        let mut b = SearchStats::default();
        a.elapsed_ms = 10;
        b.elapsed_ms = 99;
        assert!(a.same_counters(&b));
        b.nodes_visited = 1;
        assert!(!a.same_counters(&b));
    }
}
