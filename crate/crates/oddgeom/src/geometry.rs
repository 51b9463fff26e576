//! Line systems over a small point set, their counting identities, and the
//! axioms ("odd geometry" checks) satisfied by zero patterns of weighing
//! matrices.
//!
//! Lines are stored as bit masks (point p = bit p-1), so intersection sizes
//! are single popcounts. Points and line indices are 1-based in every public
//! accessor and report; masks are the 0-based internal representation.

use std::collections::BTreeSet;
use std::fmt;

/// Largest supported point count (lines are u64 masks).
pub const MAX_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("point count {0} is out of range (1..={MAX_POINTS})")]
    BadPointCount(usize),
    #[error("a line system needs at least one line")]
    EmptySystem,
    #[error("line {line} uses points outside 1..={points}")]
    MaskOutOfRange { line: usize, points: usize },
    #[error("line index {index} is out of range (1..={count})")]
    LineIndex { index: usize, count: usize },
    #[error("line indices must be distinct, got {0} twice")]
    SameLine(usize),
    #[error("point {point} is out of range (1..={points})")]
    PointIndex { point: usize, points: usize },
    #[error("point pair must be distinct, got {0} twice")]
    SamePoint(usize),
    #[error("incidence mismatch: v*d = {v}*{d} but b*r = {b}*{r}")]
    IncidenceMismatch { v: usize, b: usize, r: usize, d: usize },
    #[error("line size {r} is out of range for {v} points")]
    BadLineSize { v: usize, r: usize },
    #[error("point degree {d} is out of range for {b} lines")]
    BadPointDegree { b: usize, d: usize },
    #[error("allowed intersection size {size} exceeds the line size {r}")]
    AllowedSizeTooLarge { size: usize, r: usize },
    #[error("weight {k} is out of range for order {n}")]
    BadWeight { n: usize, k: usize },
    #[error("lines {i} and {j} intersect in {size} points, outside the allowed set")]
    SizeOutsideAllowed { i: usize, j: usize, size: usize },
    #[error("dual of a system with {0} lines does not fit in {MAX_POINTS}-bit masks")]
    DualTooWide(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: expected header `G <v> <b>`")]
    BadHeader { line: usize },
    #[error("line {line}: expected `<size> <p1> ... <psize>` with integer tokens")]
    BadToken { line: usize },
    #[error("line {line}: declared size {declared}, got {got} points")]
    SizeMismatch {
        line: usize,
        declared: usize,
        got: usize,
    },
    #[error("line {line}: points must be strictly increasing")]
    NotIncreasing { line: usize },
    #[error("line {line}: point {point} is out of range (1..={points})")]
    PointOutOfRange {
        line: usize,
        point: usize,
        points: usize,
    },
    #[error("header claims {expected} lines, body has {got}")]
    LineCountMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Invalid(#[from] GeometryError),
}

/// A family of `b` lines (point subsets) over points 1..=v.
///
/// Lines are ordered and may repeat; nothing beyond subset-of-the-point-set
/// is enforced here. Regularity and intersection conditions are checked by
/// [`LineSystem::odd_geometry_check`].
#[derive(Clone, PartialEq, Eq)]
pub struct LineSystem {
    v: usize,
    lines: Vec<u64>,
}

impl fmt::Debug for LineSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LineSystem(v={}, lines=[", self.v)?;
        for (idx, &m) in self.lines.iter().enumerate() {
            if idx > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{{{}}}", mask_points(m).iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","))?;
        }
        write!(f, "])")
    }
}

/// Sorted 1-based points of a mask.
pub fn mask_points(mask: u64) -> Vec<usize> {
    let mut pts = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        let p = m.trailing_zeros() as usize;
        pts.push(p + 1);
        m &= m - 1;
    }
    pts
}

/// Mask of sorted-or-not 1-based points; caller guarantees range.
pub fn points_mask(points: &[usize]) -> u64 {
    points.iter().fold(0u64, |m, &p| m | (1u64 << (p - 1)))
}

impl LineSystem {
    /// Builds a system from masks. Each mask must fit in the low `v` bits.
    pub fn new(v: usize, lines: Vec<u64>) -> Result<Self, GeometryError> {
        if v == 0 || v > MAX_POINTS {
            return Err(GeometryError::BadPointCount(v));
        }
        if lines.is_empty() {
            return Err(GeometryError::EmptySystem);
        }
        let full = full_mask(v);
        for (idx, &m) in lines.iter().enumerate() {
            if m & !full != 0 {
                return Err(GeometryError::MaskOutOfRange {
                    line: idx + 1,
                    points: v,
                });
            }
        }
        Ok(LineSystem { v, lines })
    }

    /// Builds a system from 1-based point lists.
    pub fn from_point_lists(v: usize, lists: &[Vec<usize>]) -> Result<Self, GeometryError> {
        if v == 0 || v > MAX_POINTS {
            return Err(GeometryError::BadPointCount(v));
        }
        let mut lines = Vec::with_capacity(lists.len());
        for (idx, list) in lists.iter().enumerate() {
            let mut mask = 0u64;
            for &p in list {
                if p == 0 || p > v {
                    return Err(GeometryError::MaskOutOfRange {
                        line: idx + 1,
                        points: v,
                    });
                }
                mask |= 1 << (p - 1);
            }
            lines.push(mask);
        }
        Self::new(v, lines)
    }

    pub fn point_count(&self) -> usize {
        self.v
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    /// Raw masks in system order (bit p-1 = point p).
    pub fn masks(&self) -> &[u64] {
        &self.lines
    }

    fn check_line_index(&self, index: usize) -> Result<usize, GeometryError> {
        if index == 0 || index > self.lines.len() {
            return Err(GeometryError::LineIndex {
                index,
                count: self.lines.len(),
            });
        }
        Ok(index - 1)
    }

    fn check_point(&self, point: usize) -> Result<usize, GeometryError> {
        if point == 0 || point > self.v {
            return Err(GeometryError::PointIndex {
                point,
                points: self.v,
            });
        }
        Ok(point - 1)
    }

    /// Sorted 1-based points of line `index` (1-based).
    pub fn line_points(&self, index: usize) -> Result<Vec<usize>, GeometryError> {
        let i = self.check_line_index(index)?;
        Ok(mask_points(self.lines[i]))
    }

    /// Size of line `index` (1-based).
    pub fn line_size(&self, index: usize) -> Result<usize, GeometryError> {
        let i = self.check_line_index(index)?;
        Ok(self.lines[i].count_ones() as usize)
    }

    /// |L_i ∩ L_j| for distinct 1-based line indices.
    pub fn intersection_size(&self, i: usize, j: usize) -> Result<usize, GeometryError> {
        if i == j {
            return Err(GeometryError::SameLine(i));
        }
        let a = self.check_line_index(i)?;
        let b = self.check_line_index(j)?;
        Ok((self.lines[a] & self.lines[b]).count_ones() as usize)
    }

    /// Codegree: the number of lines containing both points p and q
    /// (1-based, distinct, order irrelevant).
    pub fn sigma(&self, p: usize, q: usize) -> Result<usize, GeometryError> {
        if p == q {
            return Err(GeometryError::SamePoint(p));
        }
        let a = self.check_point(p)?;
        let b = self.check_point(q)?;
        let pair = (1u64 << a) | (1u64 << b);
        Ok(self.lines.iter().filter(|&&m| m & pair == pair).count())
    }

    /// Double count of (point pair, line) incidences.
    ///
    /// Left side sums C(|L_i|, 2) over lines; right side sums the codegree
    /// sigma(p,q) over point pairs. The two always agree — a mismatch is an
    /// implementation bug, which is exactly what the property tests assert.
    pub fn counting_identity(&self) -> (u64, u64) {
        let lhs: u64 = self
            .lines
            .iter()
            .map(|&m| {
                let s = m.count_ones() as u64;
                s * s.saturating_sub(1) / 2
            })
            .sum();
        let mut rhs = 0u64;
        for p in 0..self.v {
            for q in p + 1..self.v {
                let pair = (1u64 << p) | (1u64 << q);
                rhs += self.lines.iter().filter(|&&m| m & pair == pair).count() as u64;
            }
        }
        (lhs, rhs)
    }

    /// Counts of other lines by intersection size with line `index`.
    ///
    /// Every size in `allowed` gets an entry (possibly zero); a pairwise
    /// size outside `allowed` is an error naming the offending pair.
    pub fn intersection_profile(
        &self,
        index: usize,
        allowed: &AllowedSizes,
    ) -> Result<IntersectionProfile, GeometryError> {
        let i = self.check_line_index(index)?;
        let mut profile = IntersectionProfile::zeroed(allowed);
        for (j, &m) in self.lines.iter().enumerate() {
            if j == i {
                continue;
            }
            let size = (self.lines[i] & m).count_ones() as usize;
            if !allowed.contains(size) {
                return Err(GeometryError::SizeOutsideAllowed {
                    i: index,
                    j: j + 1,
                    size,
                });
            }
            profile.bump(size);
        }
        Ok(profile)
    }

    /// Degree of each point; entry p-1 is the number of lines through
    /// point p. The sum equals the sum of line sizes.
    pub fn point_degrees(&self) -> Vec<usize> {
        (0..self.v)
            .map(|p| self.lines.iter().filter(|&&m| m & (1 << p) != 0).count())
            .collect()
    }

    /// Number of distinct line masks (repeats are legal but worth flagging).
    pub fn distinct_line_count(&self) -> usize {
        self.lines.iter().collect::<BTreeSet<_>>().len()
    }

    /// Checks the four axioms that characterize zero patterns with the given
    /// parameters: (a) b lines of size r; (b) pairwise intersection sizes in
    /// the allowed set; (c) every point degree = d; (d) every point-pair
    /// codegree in the allowed set (the point/line dual of (b)).
    pub fn odd_geometry_check(&self, params: &OddGeometryParams) -> CheckReport {
        let mut report = CheckReport {
            expected_lines: params.b,
            actual_lines: self.lines.len(),
            ..CheckReport::default()
        };
        for (i, &m) in self.lines.iter().enumerate() {
            let size = m.count_ones() as usize;
            if size != params.r {
                report.size_violations.push((i + 1, size));
            }
        }
        for i in 0..self.lines.len() {
            for j in i + 1..self.lines.len() {
                let size = (self.lines[i] & self.lines[j]).count_ones() as usize;
                if !params.allowed.contains(size) {
                    report.intersection_violations.push((i + 1, j + 1, size));
                }
            }
        }
        for (p, &deg) in self.point_degrees().iter().enumerate() {
            if deg != params.d {
                report.degree_violations.push((p + 1, deg));
            }
        }
        for p in 0..self.v {
            for q in p + 1..self.v {
                let pair = (1u64 << p) | (1u64 << q);
                let sigma = self.lines.iter().filter(|&&m| m & pair == pair).count();
                if !params.allowed.contains(sigma) {
                    report.codegree_violations.push((p + 1, q + 1, sigma));
                }
            }
        }
        report
    }

    /// Point/line transpose: the dual has one point per line of `self`, and
    /// its line j collects the lines of `self` through point j.
    /// For square systems `dual` is an involution.
    pub fn dual(&self) -> Result<LineSystem, GeometryError> {
        let b = self.lines.len();
        if b > MAX_POINTS {
            return Err(GeometryError::DualTooWide(b));
        }
        let lines: Vec<u64> = (0..self.v)
            .map(|p| {
                let mut mask = 0u64;
                for (i, &m) in self.lines.iter().enumerate() {
                    if m & (1 << p) != 0 {
                        mask |= 1 << i;
                    }
                }
                mask
            })
            .collect();
        LineSystem::new(b, lines)
    }

    /// Parses the `G <v> <b>` text format: one size-prefixed line of
    /// strictly increasing 1-based points per system line. `#` starts a
    /// comment line; a size of 0 stands for an empty line.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut content = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_line, header) = content.next().ok_or(ParseError::BadHeader { line: 1 })?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("G") {
            return Err(ParseError::BadHeader { line: header_line });
        }
        let v: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or(ParseError::BadHeader { line: header_line })?;
        let b: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or(ParseError::BadHeader { line: header_line })?;
        if parts.next().is_some() {
            return Err(ParseError::BadHeader { line: header_line });
        }

        let mut lines: Vec<u64> = Vec::with_capacity(b);
        for (line_no, line) in content {
            if lines.len() == b {
                return Err(ParseError::LineCountMismatch {
                    expected: b,
                    got: b + 1,
                });
            }
            let mut nums = line.split_whitespace().map(|t| {
                t.parse::<usize>()
                    .map_err(|_| ParseError::BadToken { line: line_no })
            });
            let declared = nums.next().ok_or(ParseError::BadToken { line: line_no })??;
            let mut mask = 0u64;
            let mut last = 0usize;
            let mut got = 0usize;
            for num in nums {
                let p = num?;
                got += 1;
                if p == 0 || p > v {
                    return Err(ParseError::PointOutOfRange {
                        line: line_no,
                        point: p,
                        points: v,
                    });
                }
                if p <= last {
                    return Err(ParseError::NotIncreasing { line: line_no });
                }
                last = p;
                mask |= 1 << (p - 1);
            }
            if got != declared {
                return Err(ParseError::SizeMismatch {
                    line: line_no,
                    declared,
                    got,
                });
            }
            lines.push(mask);
        }
        if lines.len() != b {
            return Err(ParseError::LineCountMismatch {
                expected: b,
                got: lines.len(),
            });
        }
        Ok(Self::new(v, lines)?)
    }

    /// Canonical text form: `G <v> <b>` header, then each line as
    /// `<size> <p1> ... <psize>` with single spaces and a trailing newline.
    pub fn to_text(&self) -> String {
        let mut out = format!("G {} {}\n", self.v, self.lines.len());
        for &m in &self.lines {
            let pts = mask_points(m);
            out.push_str(&pts.len().to_string());
            for p in pts {
                out.push(' ');
                out.push_str(&p.to_string());
            }
            out.push('\n');
        }
        out
    }
}

pub(crate) fn full_mask(v: usize) -> u64 {
    if v == 64 {
        u64::MAX
    } else {
        (1u64 << v) - 1
    }
}

/// The set of permitted pairwise intersection (and codegree) sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllowedSizes {
    sizes: BTreeSet<usize>,
}

impl AllowedSizes {
    pub fn from_sizes(sizes: &[usize]) -> Self {
        AllowedSizes {
            sizes: sizes.iter().copied().collect(),
        }
    }

    pub fn contains(&self, size: usize) -> bool {
        self.sizes.contains(&size)
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn min(&self) -> Option<usize> {
        self.sizes.first().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.sizes.last().copied()
    }

    /// Second-smallest allowed size, if any.
    pub fn second_min(&self) -> Option<usize> {
        self.sizes.iter().nth(1).copied()
    }

    pub fn all_odd(&self) -> bool {
        self.sizes.iter().all(|s| s % 2 == 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.sizes.iter().copied()
    }

    /// Parses a comma-separated list like `1,3,5,7`.
    pub fn parse_list(text: &str) -> Option<Self> {
        let mut sizes = BTreeSet::new();
        for part in text.split(',') {
            sizes.insert(part.trim().parse::<usize>().ok()?);
        }
        Some(AllowedSizes { sizes })
    }
}

impl fmt::Display for AllowedSizes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Target parameters for a regular line system: v points, b lines of size r,
/// point degree d, and the set of permitted pairwise intersection sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddGeometryParams {
    pub v: usize,
    pub b: usize,
    pub r: usize,
    pub d: usize,
    pub allowed: AllowedSizes,
}

impl OddGeometryParams {
    /// Validates the incidence double count v*d = b*r and basic ranges.
    pub fn new(
        v: usize,
        b: usize,
        r: usize,
        d: usize,
        allowed: AllowedSizes,
    ) -> Result<Self, GeometryError> {
        if v == 0 || v > MAX_POINTS {
            return Err(GeometryError::BadPointCount(v));
        }
        if b == 0 {
            return Err(GeometryError::EmptySystem);
        }
        if r > v {
            return Err(GeometryError::BadLineSize { v, r });
        }
        if d > b {
            return Err(GeometryError::BadPointDegree { b, d });
        }
        if v * d != b * r {
            return Err(GeometryError::IncidenceMismatch { v, b, r, d });
        }
        if let Some(max) = allowed.max() {
            if max > r {
                return Err(GeometryError::AllowedSizeTooLarge { size: max, r });
            }
        }
        Ok(OddGeometryParams { v, b, r, d, allowed })
    }

    /// Parameters forced on the zero pattern of a weighing matrix of order
    /// `n` and weight `k`: n lines of size r = n-k over n points, point
    /// degree r (the transpose is a weighing matrix too), and intersection
    /// sizes congruent to n mod 2 — the parity forced by row orthogonality.
    pub fn for_weighing(n: usize, k: usize) -> Result<Self, GeometryError> {
        if n == 0 || n > MAX_POINTS {
            return Err(GeometryError::BadPointCount(n));
        }
        if k == 0 || k > n {
            return Err(GeometryError::BadWeight { n, k });
        }
        let r = n - k;
        // Common support of two rows is n - 2r + m, so m >= 2r - n keeps it
        // nonnegative and m == n (mod 2) keeps it even (orthogonality).
        let low = (2 * r).saturating_sub(n);
        let sizes: Vec<usize> = (low..=r).filter(|m| m % 2 == n % 2).collect();
        Self::new(n, n, r, r, AllowedSizes::from_sizes(&sizes))
    }

    /// The parameters of the order-23 weight-16 target: 23 lines of size 7,
    /// degree 7, intersections in {1,3,5,7}.
    pub fn w23() -> Self {
        Self::for_weighing(23, 16).expect("constants are consistent")
    }

    /// The small oracle instance: 7 lines of size 3, degree 3,
    /// intersections in {1,3}. Its only solutions are Fano planes.
    pub fn fano() -> Self {
        Self::for_weighing(7, 4).expect("constants are consistent")
    }
}

impl fmt::Display for OddGeometryParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "v={} b={} r={} d={} allowed={{{}}}",
            self.v, self.b, self.r, self.d, self.allowed
        )
    }
}

/// Per-line counts n_m of other lines meeting a fixed line in m points,
/// one bucket per allowed size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionProfile {
    /// (size m, count n_m), ascending in m; every allowed size present.
    counts: Vec<(usize, usize)>,
}

impl IntersectionProfile {
    fn zeroed(allowed: &AllowedSizes) -> Self {
        IntersectionProfile {
            counts: allowed.iter().map(|m| (m, 0)).collect(),
        }
    }

    fn bump(&mut self, size: usize) {
        let slot = self
            .counts
            .iter_mut()
            .find(|(m, _)| *m == size)
            .expect("size was checked against the allowed set");
        slot.1 += 1;
    }

    /// Builds a profile from explicit (size, count) pairs, for tests and
    /// hand-constructed fixtures.
    pub fn from_counts(pairs: &[(usize, usize)]) -> Self {
        let mut counts: Vec<(usize, usize)> = pairs.to_vec();
        counts.sort_unstable();
        IntersectionProfile { counts }
    }

    /// n_m, the number of other lines met in exactly `size` points.
    pub fn count(&self, size: usize) -> usize {
        self.counts
            .iter()
            .find(|(m, _)| *m == size)
            .map(|(_, n)| *n)
            .unwrap_or(0)
    }

    /// (size, count) pairs, ascending in size.
    pub fn buckets(&self) -> &[(usize, usize)] {
        &self.counts
    }

    /// Sum of counts: the number of other lines.
    pub fn total(&self) -> usize {
        self.counts.iter().map(|(_, n)| n).sum()
    }

    /// Sum of size * count: the total intersection with all other lines.
    pub fn weighted_total(&self) -> usize {
        self.counts.iter().map(|(m, n)| m * n).sum()
    }
}

impl fmt::Display for IntersectionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .counts
            .iter()
            .map(|(m, n)| format!("n{m}={n}"))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Both halves of the per-line profile identities for regular systems:
/// the counts must sum to b-1 and the weighted counts to r*(d-1).
///
/// At the order-23 target this is n1+n3+n5+n7 = 22 and
/// n1+3*n3+5*n5+7*n7 = 42 (equivalently n3+2*n5+3*n7 = 10).
pub fn profile_identity_check(profile: &IntersectionProfile, params: &OddGeometryParams) -> bool {
    profile.total() == params.b - 1 && profile.weighted_total() == params.r * (params.d - 1)
}

/// Outcome of [`LineSystem::odd_geometry_check`]; all indices 1-based.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub expected_lines: usize,
    pub actual_lines: usize,
    /// (line, size) where the size differs from r.
    pub size_violations: Vec<(usize, usize)>,
    /// (i, j, size) for line pairs with a disallowed intersection size.
    pub intersection_violations: Vec<(usize, usize, usize)>,
    /// (point, degree) where the degree differs from d.
    pub degree_violations: Vec<(usize, usize)>,
    /// (p, q, sigma) for point pairs with a disallowed codegree.
    pub codegree_violations: Vec<(usize, usize, usize)>,
}

impl CheckReport {
    pub fn is_valid(&self) -> bool {
        self.expected_lines == self.actual_lines
            && self.size_violations.is_empty()
            && self.intersection_violations.is_empty()
            && self.degree_violations.is_empty()
            && self.codegree_violations.is_empty()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "valid = {}", self.is_valid())?;
        if self.expected_lines != self.actual_lines {
            writeln!(
                f,
                "line_count_violation: expected {} lines, got {}",
                self.expected_lines, self.actual_lines
            )?;
        }
        for &(i, s) in &self.size_violations {
            writeln!(f, "size_violation: line {i} has size {s}")?;
        }
        for &(i, j, s) in &self.intersection_violations {
            writeln!(f, "intersection_violation: lines {i},{j} meet in {s} points")?;
        }
        for &(p, d) in &self.degree_violations {
            writeln!(f, "degree_violation: point {p} has degree {d}")?;
        }
        for &(p, q, s) in &self.codegree_violations {
            writeln!(f, "codegree_violation: points {p},{q} lie on {s} common lines")?;
        }
        Ok(())
    }
}
