//! DIMACS CNF export of the signing problem, for external SAT solvers.
//!
//! One Boolean variable per nonzero cell (true = +1, false = −1). For each
//! row pair, an agreement variable per common support column is defined by
//! four equivalence clauses, and two sequential-counter at-most-half
//! constraints (on the agreement variables and on their negations) force
//! the dot product to zero. The same gauge pins as the native sign search
//! are emitted as unit clauses.

use std::io;
use std::path::Path;

use super::sign::{is_pinned, validated_supports};
use super::SearchError;
use crate::geometry::LineSystem;
use crate::matrix::{MatrixError, WeighingMatrix};

#[derive(Debug, thiserror::Error)]
pub enum CnfError {
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(
        "rows {i} and {j} share {size} support columns; an odd overlap cannot be orthogonal"
    )]
    OddCommonSupport { i: usize, j: usize, size: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, thiserror::Error)]
pub enum DecodeError {
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("variable map does not match this pattern and target (n, k)")]
    MapMismatch,
    #[error("cell variable {var} (row {row}, col {col}) is unassigned in the model")]
    UnassignedVariable { var: i32, row: usize, col: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Cell-to-variable map: variable `i+1` is cell `cells[i]`, row-major over
/// the support. Variables beyond `var_count()` are encoding internals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMap {
    n: usize,
    k: usize,
    cells: Vec<(usize, usize)>,
    /// Dense (row, col) -> variable lookup; 0 = no variable (zero cell).
    lookup: Vec<i32>,
}

impl VarMap {
    pub fn build(ls: &LineSystem, n: usize, k: usize) -> Result<Self, SearchError> {
        let supports = validated_supports(ls, n, k)?;
        let mut cells = Vec::with_capacity(n * k);
        let mut lookup = vec![0i32; n * n];
        for (row, &support) in supports.iter().enumerate() {
            for col in 0..n {
                if support >> col & 1 == 1 {
                    cells.push((row, col));
                    lookup[row * n + col] = cells.len() as i32;
                }
            }
        }
        Ok(VarMap {
            n,
            k,
            cells,
            lookup,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn weight(&self) -> usize {
        self.k
    }

    /// Number of cell variables (the first `var_count` DIMACS variables).
    pub fn var_count(&self) -> usize {
        self.cells.len()
    }

    /// Variable for the 0-based cell (row, col), if it is a support cell.
    pub fn var(&self, row: usize, col: usize) -> Option<i32> {
        match self.lookup[row * self.n + col] {
            0 => None,
            v => Some(v),
        }
    }

    /// 0-based cell of a cell variable (1 ..= var_count).
    pub fn cell(&self, var: i32) -> Option<(usize, usize)> {
        if var >= 1 && (var as usize) <= self.cells.len() {
            Some(self.cells[var as usize - 1])
        } else {
            None
        }
    }

    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }
}

/// A complete encoding: clauses over `var_count` variables, with the cell
/// map needed to decode models.
#[derive(Debug, Clone)]
pub struct CnfEncoding {
    pub clauses: Vec<Vec<i32>>,
    pub var_count: usize,
    pub map: VarMap,
}

impl CnfEncoding {
    /// Standard DIMACS text: `c cell <row> <col> var <v>` comments
    /// (1-based), the `p cnf` header, then zero-terminated clauses.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for (idx, &(row, col)) in self.map.cells().iter().enumerate() {
            out.push_str(&format!("c cell {} {} var {}\n", row + 1, col + 1, idx + 1));
        }
        out.push_str(&format!("p cnf {} {}\n", self.var_count, self.clauses.len()));
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&format!("{lit} "));
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Sequential-counter encoding of "at most `bound` of `lits` are true".
fn at_most_k(lits: &[i32], bound: usize, next_var: &mut i32, clauses: &mut Vec<Vec<i32>>) {
    let m = lits.len();
    if bound >= m {
        return;
    }
    if bound == 0 {
        for &lit in lits {
            clauses.push(vec![-lit]);
        }
        return;
    }
    // registers[i][j]: "at least j+1 of the first i+1 literals are true".
    let mut registers = vec![vec![0i32; bound]; m - 1];
    for row in &mut registers {
        for slot in row.iter_mut() {
            *next_var += 1;
            *slot = *next_var;
        }
    }
    clauses.push(vec![-lits[0], registers[0][0]]);
    for &reg in &registers[0][1..] {
        clauses.push(vec![-reg]);
    }
    for i in 1..m - 1 {
        clauses.push(vec![-lits[i], registers[i][0]]);
        clauses.push(vec![-registers[i - 1][0], registers[i][0]]);
        for j in 1..bound {
            clauses.push(vec![-lits[i], -registers[i - 1][j - 1], registers[i][j]]);
            clauses.push(vec![-registers[i - 1][j], registers[i][j]]);
        }
        clauses.push(vec![-lits[i], -registers[i - 1][bound - 1]]);
    }
    clauses.push(vec![-lits[m - 1], -registers[m - 2][bound - 1]]);
}

/// Encodes the signing problem for `ls` as CNF. Satisfying models decode
/// to matrices whose rows are pairwise orthogonal with weight `k`.
pub fn encode_cnf(ls: &LineSystem, n: usize, k: usize) -> Result<CnfEncoding, CnfError> {
    let supports = validated_supports(ls, n, k)?;
    for i in 0..n {
        for j in i + 1..n {
            let size = (supports[i] & supports[j]).count_ones() as usize;
            if size % 2 == 1 {
                return Err(CnfError::OddCommonSupport {
                    i: i + 1,
                    j: j + 1,
                    size,
                });
            }
        }
    }

    let map = VarMap::build(ls, n, k)?;
    let mut next_var = map.var_count() as i32;
    let mut clauses: Vec<Vec<i32>> = Vec::new();

    // Gauge pins as unit clauses.
    for &(row, col) in map.cells() {
        if is_pinned(&supports, row, col) {
            clauses.push(vec![map.var(row, col).expect("support cell has a var")]);
        }
    }

    for i in 0..n {
        for j in i + 1..n {
            let common = supports[i] & supports[j];
            let m = common.count_ones() as usize;
            if m == 0 {
                continue;
            }
            // One agreement variable per shared column: p <-> (a <-> b).
            let mut agreement = Vec::with_capacity(m);
            let mut cols = common;
            while cols != 0 {
                let col = cols.trailing_zeros() as usize;
                cols &= cols - 1;
                let a = map.var(i, col).expect("common support cell");
                let b = map.var(j, col).expect("common support cell");
                next_var += 1;
                let p = next_var;
                clauses.push(vec![-p, -a, b]);
                clauses.push(vec![-p, a, -b]);
                clauses.push(vec![p, a, b]);
                clauses.push(vec![p, -a, -b]);
                agreement.push(p);
            }
            // Dot product zero <=> exactly half of the shared columns agree.
            at_most_k(&agreement, m / 2, &mut next_var, &mut clauses);
            let disagreement: Vec<i32> = agreement.iter().map(|&p| -p).collect();
            at_most_k(&disagreement, m / 2, &mut next_var, &mut clauses);
        }
    }

    Ok(CnfEncoding {
        clauses,
        var_count: next_var as usize,
        map,
    })
}

/// Encodes and writes the DIMACS file, returning the map for decoding.
pub fn export_cnf<P: AsRef<Path>>(
    ls: &LineSystem,
    n: usize,
    k: usize,
    path: P,
) -> Result<VarMap, CnfError> {
    let encoding = encode_cnf(ls, n, k)?;
    std::fs::write(path, encoding.to_dimacs())?;
    Ok(encoding.map)
}

/// Rebuilds the matrix a model describes. Literals whose variables are
/// encoding internals (beyond the cell variables) are ignored; zeros are
/// skipped as DIMACS terminators. The result is structurally well-formed
/// whether or not it verifies — callers check `verify()`.
pub fn decode_model(
    map: &VarMap,
    model: &[i32],
    ls: &LineSystem,
    n: usize,
    k: usize,
) -> Result<WeighingMatrix, DecodeError> {
    let expected = VarMap::build(ls, n, k)?;
    if expected != *map {
        return Err(DecodeError::MapMismatch);
    }

    let mut assignment: Vec<i8> = vec![0; map.var_count()];
    for &lit in model {
        if lit == 0 {
            continue;
        }
        let var = lit.unsigned_abs() as usize;
        if var >= 1 && var <= map.var_count() {
            assignment[var - 1] = if lit > 0 { 1 } else { -1 };
        }
    }

    let mut rows = vec![vec![0i8; n]; n];
    for (idx, &(row, col)) in map.cells().iter().enumerate() {
        match assignment[idx] {
            0 => {
                return Err(DecodeError::UnassignedVariable {
                    var: idx as i32 + 1,
                    row: row + 1,
                    col: col + 1,
                })
            }
            value => rows[row][col] = value,
        }
    }
    Ok(WeighingMatrix::from_rows(n, k, &rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::LineSystem;
    use crate::testutil::i3_pattern;

    /// Exhaustive satisfiability over all `var_count` variables — only for
    /// tiny encodings. Returns a full model when satisfiable.
    fn brute_model(var_count: usize, clauses: &[Vec<i32>]) -> Option<Vec<i32>> {
        assert!(var_count <= 20, "brute force is for tiny encodings");
        'outer: for bits in 0u32..1 << var_count {
            for clause in clauses {
                let sat = clause.iter().any(|&lit| {
                    let var = lit.unsigned_abs() as usize;
                    let value = bits >> (var - 1) & 1 == 1;
                    (lit > 0) == value
                });
                if !sat {
                    continue 'outer;
                }
            }
            return Some(
                (1..=var_count as i32)
                    .map(|v| if bits >> (v - 1) & 1 == 1 { v } else { -v })
                    .collect(),
            );
        }
        None
    }

    #[test]
    fn sequential_counter_matches_brute_force() {
        for m in 1..=4usize {
            for bound in 0..=m {
                let lits: Vec<i32> = (1..=m as i32).collect();
                let mut next_var = m as i32;
                let mut clauses = Vec::new();
                at_most_k(&lits, bound, &mut next_var, &mut clauses);
                let aux = next_var as usize - m;
                for bits in 0u32..1 << m {
                    let trues = bits.count_ones() as usize;
                    // Does some aux assignment satisfy all clauses?
                    let mut extendable = false;
                    for aux_bits in 0u32..1 << aux {
                        let full = bits | (aux_bits << m);
                        let ok = clauses.iter().all(|clause| {
                            clause.iter().any(|&lit| {
                                let var = lit.unsigned_abs() as usize;
                                let value = full >> (var - 1) & 1 == 1;
                                (lit > 0) == value
                            })
                        });
                        if ok {
                            extendable = true;
                            break;
                        }
                    }
                    assert_eq!(
                        extendable,
                        trues <= bound,
                        "m={m} bound={bound} bits={bits:b}"
                    );
                }
            }
        }
    }

    #[test]
    fn singleton_supports_need_only_unit_clauses() {
        let encoding = encode_cnf(&i3_pattern(), 3, 1).unwrap();
        assert_eq!(encoding.var_count, 3);
        assert_eq!(encoding.clauses, vec![vec![1], vec![2], vec![3]]);
        let model = brute_model(encoding.var_count, &encoding.clauses).unwrap();
        let m = decode_model(&encoding.map, &model, &i3_pattern(), 3, 1).unwrap();
        assert!(m.verify().is_valid());
        for i in 0..3 {
            assert_eq!(m.entry(i, i), 1);
        }
    }

    #[test]
    fn order_two_encoding_round_trips() {
        let ls = LineSystem::new(2, vec![0, 0]).unwrap();
        let encoding = encode_cnf(&ls, 2, 2).unwrap();
        let model = brute_model(encoding.var_count, &encoding.clauses)
            .expect("the order-2 full pattern is signable");
        let m = decode_model(&encoding.map, &model, &ls, 2, 2).unwrap();
        assert!(m.verify().is_valid());
        assert_eq!(m.zero_pattern().masks(), ls.masks());
    }

    #[test]
    fn forcing_double_agreement_is_unsatisfiable() {
        // Rows 1 and 2 share both columns; forcing both agreement
        // variables true makes the dot product 2, never 0.
        let ls = LineSystem::new(2, vec![0, 0]).unwrap();
        let mut encoding = encode_cnf(&ls, 2, 2).unwrap();
        let first_agreement = encoding.map.var_count() as i32 + 1;
        encoding.clauses.push(vec![first_agreement]);
        encoding.clauses.push(vec![first_agreement + 1]);
        assert!(brute_model(encoding.var_count, &encoding.clauses).is_none());
    }

    #[test]
    fn odd_overlap_is_reported_as_a_defect() {
        let ls = LineSystem::from_point_lists(3, &[vec![1], vec![1], vec![2]]).unwrap();
        assert!(matches!(
            encode_cnf(&ls, 3, 2),
            Err(CnfError::OddCommonSupport { i: 1, j: 3, size: 1 })
        ));
    }

    #[test]
    fn decode_rejects_foreign_maps_and_partial_models() {
        let ls = i3_pattern();
        let map = VarMap::build(&ls, 3, 1).unwrap();
        let other = LineSystem::from_point_lists(3, &[vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap();
        assert!(matches!(
            decode_model(&map, &[1, 2, 3], &other, 3, 1),
            Err(DecodeError::MapMismatch)
        ));
        assert!(matches!(
            decode_model(&map, &[1, 3], &ls, 3, 1),
            Err(DecodeError::UnassignedVariable { var: 2, .. })
        ));
    }

    #[test]
    fn flipped_variables_decode_structurally_but_fail_verify() {
        let ls = LineSystem::new(2, vec![0, 0]).unwrap();
        let encoding = encode_cnf(&ls, 2, 2).unwrap();
        let mut model = brute_model(encoding.var_count, &encoding.clauses).unwrap();
        model[0] = -model[0];
        let m = decode_model(&encoding.map, &model, &ls, 2, 2).unwrap();
        assert!(!m.verify().is_valid());
    }

    #[test]
    fn dimacs_text_has_map_comments_and_header() {
        let encoding = encode_cnf(&i3_pattern(), 3, 1).unwrap();
        let text = encoding.to_dimacs();
        assert!(text.starts_with("c cell 1 1 var 1\n"));
        assert!(text.contains("\np cnf 3 3\n"));
        assert!(text.ends_with("3 0\n"));
    }

    #[test]
    fn var_map_lookup_is_consistent() {
        let map = VarMap::build(&i3_pattern(), 3, 1).unwrap();
        assert_eq!(map.var_count(), 3);
        assert_eq!(map.var(0, 0), Some(1));
        assert_eq!(map.var(0, 1), None);
        assert_eq!(map.cell(2), Some((1, 1)));
        assert_eq!(map.cell(4), None);
    }
}
