//! Shared fixtures, independent set-based oracles, random generators, and a
//! tiny DPLL model finder used by the integration suites.
//!
//! The oracles deliberately avoid the crate's bitmask internals: they work on
//! plain `Vec<usize>` point lists and integer vectors, so agreement between
//! the crate and this module is evidence, not tautology.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use oddgeom::{LineSystem, WeighingMatrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

/// A valid order-4 weight-3 matrix; its zero pattern is the diagonal.
pub fn w43() -> WeighingMatrix {
    WeighingMatrix::from_rows(
        4,
        3,
        &[
            vec![0, 1, 1, 1],
            vec![1, 0, 1, -1],
            vec![1, -1, 0, 1],
            vec![1, 1, -1, 0],
        ],
    )
    .unwrap()
}

/// A valid circulant order-7 weight-4 matrix; zero positions of the first
/// row {4, 6, 7} form a planar difference set mod 7, so the zero pattern
/// is a Fano plane.
pub fn w74() -> WeighingMatrix {
    WeighingMatrix::circulant(&[1, -1, -1, 0, -1, 0, 0]).unwrap()
}

/// The standard Fano plane on points 1..=7.
pub fn fano() -> LineSystem {
    LineSystem::from_point_lists(
        7,
        &[
            vec![1, 2, 3],
            vec![1, 4, 5],
            vec![1, 6, 7],
            vec![2, 4, 6],
            vec![2, 5, 7],
            vec![3, 4, 7],
            vec![3, 5, 6],
        ],
    )
    .unwrap()
}

/// Zero pattern of the 3x3 identity: lines {2,3}, {1,3}, {1,2}.
pub fn i3_pattern() -> LineSystem {
    LineSystem::from_point_lists(3, &[vec![2, 3], vec![1, 3], vec![1, 2]]).unwrap()
}

// ---------------------------------------------------------------------------
// Set-based oracles (no bitmasks)
// ---------------------------------------------------------------------------

/// 1-based point lists of a line system, via the public accessors
/// (line indices are 1-based externally).
pub fn point_lists(ls: &LineSystem) -> Vec<Vec<usize>> {
    (1..=ls.line_count())
        .map(|i| ls.line_points(i).unwrap())
        .collect()
}

/// Left side of the pair-counting identity: sum over lines of C(size, 2).
pub fn naive_counting_lhs(lists: &[Vec<usize>]) -> u64 {
    lists
        .iter()
        .map(|l| {
            let s = l.len() as u64;
            s * (s.saturating_sub(1)) / 2
        })
        .sum()
}

/// Right side: sum over unordered point pairs of the number of lines
/// containing both points, counted with HashSet membership.
pub fn naive_counting_rhs(v: usize, lists: &[Vec<usize>]) -> u64 {
    let sets: Vec<HashSet<usize>> = lists.iter().map(|l| l.iter().copied().collect()).collect();
    let mut total = 0u64;
    for p in 1..=v {
        for q in (p + 1)..=v {
            total += sets.iter().filter(|s| s.contains(&p) && s.contains(&q)).count() as u64;
        }
    }
    total
}

/// Pairwise intersection size via sorted-set intersection.
pub fn naive_intersection(a: &[usize], b: &[usize]) -> usize {
    let sa: BTreeSet<_> = a.iter().copied().collect();
    b.iter().filter(|p| sa.contains(p)).count()
}

/// Degree of each point (1-based indexing; index 0 unused).
pub fn naive_degrees(v: usize, lists: &[Vec<usize>]) -> Vec<usize> {
    let mut deg = vec![0usize; v + 1];
    for l in lists {
        for &p in l {
            deg[p] += 1;
        }
    }
    deg.remove(0);
    deg
}

/// Checks a matrix the long way: entries in {-1,0,+1}, every row and column
/// carries exactly `k` nonzeros, and all distinct row pairs are orthogonal
/// under i64 arithmetic.
pub fn naive_is_weighing(rows: &[Vec<i64>], k: usize) -> bool {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return false;
    }
    for r in rows {
        if r.iter().any(|&x| x.abs() > 1) {
            return false;
        }
        if r.iter().filter(|&&x| x != 0).count() != k {
            return false;
        }
    }
    for c in 0..n {
        if rows.iter().filter(|row| row[c] != 0).count() != k {
            return false;
        }
    }
    for i in 0..n {
        for j in 0..n {
            let dot: i64 = (0..n).map(|c| rows[i][c] * rows[j][c]).sum();
            let expect = if i == j { k as i64 } else { 0 };
            if dot != expect {
                return false;
            }
        }
    }
    true
}

/// Extracts rows as i64 for the naive checker.
pub fn matrix_rows(m: &WeighingMatrix) -> Vec<Vec<i64>> {
    (0..m.n())
        .map(|r| m.row(r).iter().map(|&x| x as i64).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// Random generators (deterministic seeds supplied by callers)
// ---------------------------------------------------------------------------

/// A uniformly random signed permutation matrix of order `n` (weight 1).
pub fn random_signed_permutation(rng: &mut ChaCha8Rng, n: usize) -> WeighingMatrix {
    let mut cols: Vec<usize> = (0..n).collect();
    cols.shuffle(rng);
    let rows: Vec<Vec<i8>> = cols
        .iter()
        .map(|&c| {
            let mut row = vec![0i8; n];
            row[c] = if rng.gen_bool(0.5) { 1 } else { -1 };
            row
        })
        .collect();
    WeighingMatrix::from_rows(n, 1, &rows).unwrap()
}

/// Applies random row/column negations and permutations to a matrix.
/// These operations preserve validity, so the result is a fresh-looking
/// valid matrix with the same order and weight.
pub fn scramble(rng: &mut ChaCha8Rng, m: &WeighingMatrix) -> WeighingMatrix {
    let n = m.n();
    let mut out = m.clone();
    for r in 0..n {
        if rng.gen_bool(0.5) {
            out.negate_row(r);
        }
    }
    for c in 0..n {
        if rng.gen_bool(0.5) {
            out.negate_col(c);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    out.permute_rows(&perm).unwrap();
    perm.shuffle(rng);
    out.permute_cols(&perm).unwrap();
    out
}

/// A random valid weighing matrix: a scrambled fixture, a signed
/// permutation, or a direct sum of smaller ones.
pub fn random_valid_matrix(rng: &mut ChaCha8Rng) -> WeighingMatrix {
    match rng.gen_range(0..5u8) {
        0 => scramble(rng, &w43()),
        1 => scramble(rng, &w74()),
        2 => {
            let n = rng.gen_range(2..=10);
            random_signed_permutation(rng, n)
        }
        3 => {
            let a = scramble(rng, &w43());
            let b = scramble(rng, &w43());
            scramble(rng, &WeighingMatrix::direct_sum(&a, &b).unwrap())
        }
        _ => {
            let a = scramble(rng, &w74());
            let b = scramble(rng, &w74());
            scramble(rng, &WeighingMatrix::direct_sum(&a, &b).unwrap())
        }
    }
}

/// A random line system on `v` points: `b` lines of arbitrary sizes in
/// `1..=v`, sampled as point subsets. No geometric constraints — these
/// exercise identities that hold for every system.
pub fn random_line_system(rng: &mut ChaCha8Rng, v: usize, b: usize) -> LineSystem {
    let lists: Vec<Vec<usize>> = (0..b)
        .map(|_| {
            let size = rng.gen_range(1..=v);
            let mut points: Vec<usize> = (1..=v).collect();
            points.shuffle(rng);
            points.truncate(size);
            points.sort_unstable();
            points
        })
        .collect();
    LineSystem::from_point_lists(v, &lists).unwrap()
}

// ---------------------------------------------------------------------------
// DIMACS parsing and a small DPLL solver (for CNF round-trip tests)
// ---------------------------------------------------------------------------

/// Clauses and variable count parsed from DIMACS text.
pub struct Dimacs {
    pub var_count: usize,
    pub clauses: Vec<Vec<i32>>,
    /// `(row, col, var)` triples recovered from `c cell` comments, 1-based.
    pub cells: Vec<(usize, usize, i32)>,
}

pub fn parse_dimacs(text: &str) -> Dimacs {
    let mut var_count = 0usize;
    let mut declared = 0usize;
    let mut clauses = Vec::new();
    let mut cells = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("c ") {
            let tok: Vec<&str> = rest.split_whitespace().collect();
            if tok.len() == 5 && tok[0] == "cell" && tok[3] == "var" {
                cells.push((
                    tok[1].parse().unwrap(),
                    tok[2].parse().unwrap(),
                    tok[4].parse().unwrap(),
                ));
            }
            continue;
        }
        if line == "c" {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p cnf ") {
            let mut it = rest.split_whitespace();
            var_count = it.next().unwrap().parse().unwrap();
            declared = it.next().unwrap().parse().unwrap();
            continue;
        }
        let lits: Vec<i32> = line
            .split_whitespace()
            .map(|t| t.parse::<i32>().unwrap())
            .take_while(|&l| l != 0)
            .collect();
        clauses.push(lits);
    }
    assert_eq!(clauses.len(), declared, "DIMACS clause count mismatch");
    Dimacs {
        var_count,
        clauses,
        cells,
    }
}

/// Plain DPLL: unit propagation plus two-way branching on the first
/// unassigned variable. Returns a full assignment (index = var, true = +)
/// or None if unsatisfiable. Fine for the few-hundred-clause instances
/// these tests produce; not a general-purpose solver.
pub fn dpll(var_count: usize, clauses: &[Vec<i32>]) -> Option<Vec<bool>> {
    let mut assign: Vec<Option<bool>> = vec![None; var_count + 1];
    if solve(clauses, &mut assign) {
        Some(
            assign
                .into_iter()
                .skip(1)
                .map(|a| a.unwrap_or(false))
                .collect(),
        )
    } else {
        None
    }
}

fn solve(clauses: &[Vec<i32>], assign: &mut Vec<Option<bool>>) -> bool {
    // Unit propagation to fixpoint; remember what we set for backtracking.
    let mut trail: Vec<usize> = Vec::new();
    loop {
        let mut changed = false;
        for clause in clauses {
            let mut satisfied = false;
            let mut unassigned: Option<i32> = None;
            let mut unassigned_count = 0;
            for &lit in clause {
                match assign[lit.unsigned_abs() as usize] {
                    Some(val) if val == (lit > 0) => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        unassigned = Some(lit);
                        unassigned_count += 1;
                    }
                }
            }
            if satisfied {
                continue;
            }
            match unassigned_count {
                0 => {
                    for &v in &trail {
                        assign[v] = None;
                    }
                    return false;
                }
                1 => {
                    let lit = unassigned.unwrap();
                    let var = lit.unsigned_abs() as usize;
                    assign[var] = Some(lit > 0);
                    trail.push(var);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let branch = (1..assign.len()).find(|&v| assign[v].is_none());
    let Some(var) = branch else {
        return true; // everything assigned, no clause falsified
    };
    for &val in &[true, false] {
        assign[var] = Some(val);
        if solve(clauses, assign) {
            return true;
        }
        assign[var] = None;
    }
    for &v in &trail {
        assign[v] = None;
    }
    false
}

/// Checks an assignment against clauses (sanity for the solver itself).
pub fn satisfies(assign: &[bool], clauses: &[Vec<i32>]) -> bool {
    clauses.iter().all(|c| {
        c.iter()
            .any(|&lit| assign[(lit.unsigned_abs() as usize) - 1] == (lit > 0))
    })
}

/// Deterministic RNG for a named test.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
