//! Backtracking enumeration of regular line systems with constrained
//! pairwise intersections.
//!
//! Lines are placed as bit masks in numerically nondecreasing order (so a
//! solution *set* is explored exactly once), with the optional further
//! normalization that the first line is pinned to {1..r} — any solution can
//! be relabeled into that form, so pinning preserves existence and touches
//! every isomorphism class while skipping most of the label group.
//!
//! The search tree is split at a shallow depth into independent root
//! prefixes. Workers pull roots from a shared cursor, so any thread count
//! produces the same solution set; a single worker is bit-reproducible.
//! Unfinished roots are reported back on truncation and can be fed into a
//! later run (the checkpoint file holds exactly these roots).

use std::io::{self, BufRead, Write};
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use super::{Completion, PruneCounts, SearchBudget, SearchError, SearchStats};
use crate::geometry::{full_mask, GeometryError, LineSystem, OddGeometryParams};

/// Next mask with the same popcount in ascending numeric order, if any.
fn next_same_popcount(m: u64) -> Option<u64> {
    if m == 0 {
        return None;
    }
    let c = m & m.wrapping_neg();
    let r = m.checked_add(c)?;
    Some(r | ((m ^ r) >> (c.trailing_zeros() + 2)))
}

/// Next same-popcount mask still inside the low `v` bits.
fn next_fitting(m: u64, v: usize) -> Option<u64> {
    next_same_popcount(m).filter(|&c| c & !full_mask(v) == 0)
}

fn binom2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Saturating binomial coefficient.
fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc * (n - k + i) as u128 / i as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

fn pair_index(a: usize, b: usize) -> usize {
    debug_assert!(a < b);
    b * (b - 1) / 2 + a
}

/// A prefix of a candidate system under construction: the placed lines and
/// the incremental records (point degrees, per-line intersection totals,
/// point-pair codegrees) the pruning rules read.
///
/// `from_lines` only validates shape (sizes, range, ordering), not the
/// intersection and degree rules, so deliberately broken states can be
/// built and judged by [`prune_partial`].
#[derive(Debug, Clone)]
pub struct PartialGeometry {
    params: OddGeometryParams,
    /// Lookup by size 0..=r.
    allowed: Vec<bool>,
    min_allowed: Option<usize>,
    max_allowed: Option<usize>,
    placed: Vec<u64>,
    /// Per placed line: total intersection with the other placed lines.
    inter_sum: Vec<u32>,
    degrees: Vec<u8>,
    /// Points already at degree d.
    full_points: u64,
    /// Points that must lie on every remaining line.
    urgent: u64,
    /// Some point needs more lines than remain.
    hopeless: bool,
    /// Codegree per point pair, indexed by pair_index.
    pair_sigma: Vec<u8>,
    /// Point pairs with codegree 0.
    uncovered: u64,
    /// Scratch: per-line intersection increments of the candidate.
    inc: Vec<u32>,
}

impl PartialGeometry {
    pub fn new(params: OddGeometryParams) -> Self {
        let v = params.v;
        let b = params.b;
        let r = params.r;
        let allowed = (0..=r).map(|m| params.allowed.contains(m)).collect();
        let mut pg = PartialGeometry {
            min_allowed: params.allowed.min(),
            max_allowed: params.allowed.max(),
            allowed,
            placed: Vec::with_capacity(b),
            inter_sum: Vec::with_capacity(b),
            degrees: vec![0; v],
            full_points: 0,
            urgent: 0,
            hopeless: false,
            pair_sigma: vec![0; v * (v - 1) / 2],
            uncovered: binom2(v as u64),
            inc: vec![0; b],
            params,
        };
        pg.recompute_urgency();
        pg
    }

    /// Rebuilds a partial state from masks, validating shape only.
    pub fn from_lines(params: OddGeometryParams, masks: &[u64]) -> Result<Self, SearchError> {
        if masks.len() > params.b {
            return Err(SearchError::TooManyLines {
                got: masks.len(),
                b: params.b,
            });
        }
        for (idx, &m) in masks.iter().enumerate() {
            if m & !full_mask(params.v) != 0 {
                return Err(SearchError::Geometry(GeometryError::MaskOutOfRange {
                    line: idx + 1,
                    points: params.v,
                }));
            }
            if m.count_ones() as usize != params.r {
                return Err(SearchError::WrongLineSize {
                    line: idx + 1,
                    size: m.count_ones() as usize,
                    r: params.r,
                });
            }
            if idx > 0 && m < masks[idx - 1] {
                return Err(SearchError::NotSorted { line: idx + 1 });
            }
        }
        let mut pg = Self::new(params);
        for &m in masks {
            pg.force_place(m);
        }
        Ok(pg)
    }

    pub fn params(&self) -> &OddGeometryParams {
        &self.params
    }

    pub fn lines(&self) -> &[u64] {
        &self.placed
    }

    pub fn lines_placed(&self) -> usize {
        self.placed.len()
    }

    pub fn is_complete(&self) -> bool {
        self.placed.len() == self.params.b
    }

    pub fn point_degrees(&self) -> Vec<usize> {
        self.degrees.iter().map(|&d| d as usize).collect()
    }

    /// The placed lines as a system (None while nothing is placed).
    pub fn as_line_system(&self) -> Option<LineSystem> {
        if self.placed.is_empty() {
            None
        } else {
            Some(
                LineSystem::new(self.params.v, self.placed.clone())
                    .expect("placed masks stay inside the point range"),
            )
        }
    }

    fn recompute_urgency(&mut self) {
        let rem = self.params.b - self.placed.len();
        let d = self.params.d;
        let mut urgent = 0u64;
        let mut hopeless = false;
        for p in 0..self.params.v {
            let deficit = d.saturating_sub(self.degrees[p] as usize);
            if deficit > rem {
                hopeless = true;
            } else if deficit == rem && rem > 0 {
                urgent |= 1 << p;
            }
        }
        self.urgent = urgent;
        self.hopeless = hopeless;
    }

    /// Checks the candidate against every incremental rule and places it
    /// when all pass, attributing any rejection to its rule's counter.
    pub(crate) fn try_place(&mut self, cand: u64, prunes: &mut PruneCounts) -> bool {
        debug_assert!(!self.hopeless);
        let t = self.placed.len();
        debug_assert!(t < self.params.b);
        let rem_after = (self.params.b - t - 1) as u64;

        // Point degrees: nobody past d, and the must-cover points covered.
        if cand & self.full_points != 0 || self.urgent & !cand != 0 {
            prunes.point_degree += 1;
            return false;
        }

        // Intersection sizes with every placed line must be allowed.
        let mut s_new: u64 = 0;
        for j in 0..t {
            let m = (cand & self.placed[j]).count_ones() as usize;
            if m >= self.allowed.len() || !self.allowed[m] {
                prunes.parity += 1;
                return false;
            }
            self.inc[j] = m as u32;
            s_new += m as u64;
        }

        // Each line's running intersection total must still be able to hit
        // r*(d-1): the remaining lines add between min and max each.
        if let (Some(mn), Some(mx)) = (self.min_allowed, self.max_allowed) {
            let target = (self.params.r * (self.params.d.saturating_sub(1))) as u64;
            let (mn, mx) = (mn as u64, mx as u64);
            for j in 0..t {
                let s = self.inter_sum[j] as u64 + self.inc[j] as u64;
                if s + mn * rem_after > target || s + mx * rem_after < target {
                    prunes.profile_bound += 1;
                    return false;
                }
            }
            if s_new + mn * rem_after > target || s_new + mx * rem_after < target {
                prunes.profile_bound += 1;
                return false;
            }
        }

        // Codegrees only grow: cap them at the allowed maximum, and make
        // sure the remaining lines can still cover every uncovered pair.
        let mut pts = [0usize; 64];
        let mut np = 0;
        let mut m = cand;
        while m != 0 {
            pts[np] = m.trailing_zeros() as usize;
            np += 1;
            m &= m - 1;
        }
        let mut newly_covered: u64 = 0;
        if let Some(mx) = self.max_allowed {
            for a in 0..np {
                for b in a + 1..np {
                    let sigma = self.pair_sigma[pair_index(pts[a], pts[b])] as usize;
                    if sigma + 1 > mx {
                        prunes.codegree += 1;
                        return false;
                    }
                    if sigma == 0 {
                        newly_covered += 1;
                    }
                }
            }
        }
        if let Some(mn) = self.min_allowed {
            if mn >= 1 {
                let capacity = rem_after * binom2(self.params.r as u64);
                if self.uncovered - newly_covered > capacity {
                    prunes.codegree += 1;
                    return false;
                }
            }
        }

        self.commit(cand, &pts[..np], s_new as u32, newly_covered);
        true
    }

    /// Places without feasibility checks (trusted rebuilds, shape-only
    /// construction). Keeps all incremental records consistent.
    pub(crate) fn force_place(&mut self, cand: u64) {
        let t = self.placed.len();
        let mut s_new: u64 = 0;
        for j in 0..t {
            let m = (cand & self.placed[j]).count_ones();
            self.inc[j] = m;
            s_new += m as u64;
        }
        let mut pts = [0usize; 64];
        let mut np = 0;
        let mut m = cand;
        while m != 0 {
            pts[np] = m.trailing_zeros() as usize;
            np += 1;
            m &= m - 1;
        }
        let mut newly_covered = 0;
        for a in 0..np {
            for b in a + 1..np {
                if self.pair_sigma[pair_index(pts[a], pts[b])] == 0 {
                    newly_covered += 1;
                }
            }
        }
        self.commit(cand, &pts[..np], s_new as u32, newly_covered);
    }

    fn commit(&mut self, cand: u64, pts: &[usize], s_new: u32, newly_covered: u64) {
        let t = self.placed.len();
        for j in 0..t {
            self.inter_sum[j] += self.inc[j];
        }
        self.inter_sum.push(s_new);
        self.placed.push(cand);
        for &p in pts {
            self.degrees[p] += 1;
            if self.degrees[p] as usize >= self.params.d {
                self.full_points |= 1 << p;
            }
        }
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                self.pair_sigma[pair_index(pts[a], pts[b])] += 1;
            }
        }
        self.uncovered -= newly_covered;
        self.recompute_urgency();
    }

    pub(crate) fn unplace(&mut self) {
        let cand = self.placed.pop().expect("unplace needs a placed line");
        self.inter_sum.pop();
        for j in 0..self.placed.len() {
            self.inter_sum[j] -= (cand & self.placed[j]).count_ones();
        }
        let mut m = cand;
        while m != 0 {
            let p = m.trailing_zeros() as usize;
            m &= m - 1;
            self.degrees[p] -= 1;
            if (self.degrees[p] as usize) < self.params.d {
                self.full_points &= !(1 << p);
            }
        }
        let mut pts = [0usize; 64];
        let mut np = 0;
        let mut m = cand;
        while m != 0 {
            pts[np] = m.trailing_zeros() as usize;
            np += 1;
            m &= m - 1;
        }
        for a in 0..np {
            for b in a + 1..np {
                let idx = pair_index(pts[a], pts[b]);
                self.pair_sigma[idx] -= 1;
                if self.pair_sigma[idx] == 0 {
                    self.uncovered += 1;
                }
            }
        }
        self.recompute_urgency();
    }

    /// Final filter at full depth: exact degrees and codegree membership.
    /// (Degrees are forced by the incremental caps plus counting, and
    /// codegrees never exceed the maximum; the one clause the incremental
    /// rules cannot guarantee is codegree *membership* in the allowed set.)
    pub(crate) fn completion_valid(&self) -> bool {
        debug_assert!(self.is_complete());
        for p in 0..self.params.v {
            if self.degrees[p] as usize != self.params.d {
                return false;
            }
        }
        self.pair_sigma.iter().all(|&s| {
            let s = s as usize;
            s < self.allowed.len() && self.allowed[s]
        })
    }
}

/// Returns false only when the partial state provably cannot be completed
/// to a system passing the axioms — every rule here is a necessary
/// condition, so a completable state is never rejected.
///
/// Everything is recomputed from the placed masks, independently of the
/// engine's incremental records; the property tests compare the two.
pub fn prune_partial(pg: &PartialGeometry) -> bool {
    let p = &pg.params;
    let placed = pg.lines();
    let t = placed.len();
    if t > p.b {
        return false;
    }
    let rem = (p.b - t) as u64;

    for &m in placed {
        if m.count_ones() as usize != p.r {
            return false;
        }
    }

    // (a) every placed pairwise intersection size must be allowed.
    for i in 0..t {
        for j in i + 1..t {
            let size = (placed[i] & placed[j]).count_ones() as usize;
            if !p.allowed.contains(size) {
                return false;
            }
        }
    }

    // (b) no point past degree d, and none needing more lines than remain.
    for point in 0..p.v {
        let deg = placed.iter().filter(|&&m| m & (1 << point) != 0).count();
        if deg > p.d || (p.d - deg) as u64 > rem {
            return false;
        }
    }

    // (c) each line's intersection total must be able to reach r*(d-1),
    // with every remaining line contributing between min and max.
    if let (Some(mn), Some(mx)) = (p.allowed.min(), p.allowed.max()) {
        let target = (p.r * p.d.saturating_sub(1)) as u64;
        for i in 0..t {
            let s: u64 = (0..t)
                .filter(|&j| j != i)
                .map(|j| (placed[i] & placed[j]).count_ones() as u64)
                .sum();
            if s + mn as u64 * rem > target || s + mx as u64 * rem < target {
                return false;
            }
        }
    }

    // (d) codegrees only grow toward the allowed maximum, and uncovered
    // point pairs must fit into the remaining lines' pair capacity.
    let mut uncovered: u64 = 0;
    for a in 0..p.v {
        for bq in a + 1..p.v {
            let pair = (1u64 << a) | (1u64 << bq);
            let sigma = placed.iter().filter(|&&m| m & pair == pair).count();
            if let Some(mx) = p.allowed.max() {
                if sigma > mx {
                    return false;
                }
            }
            if sigma == 0 {
                uncovered += 1;
            }
        }
    }
    if let Some(mn) = p.allowed.min() {
        if mn >= 1 && uncovered > rem * binom2(p.r as u64) {
            return false;
        }
    }

    // Aggregate incidence capacity: the remaining degree deficits must be
    // exactly what the remaining lines provide. (With uniform line sizes
    // this follows from v*d = b*r, so it is a defensive recheck.)
    let total_deficit: u64 = (0..p.v)
        .map(|point| {
            let deg = placed.iter().filter(|&&m| m & (1 << point) != 0).count();
            (p.d - deg) as u64
        })
        .sum();
    if total_deficit != rem * p.r as u64 {
        return false;
    }

    true
}

#[derive(Debug, thiserror::Error)]
pub enum FrontierError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: bad hex mask `{token}`")]
    BadMask { line: usize, token: String },
}

/// Writes unfinished search roots, one node per line, as space-separated
/// hex masks. `#` lines are comments.
pub fn write_frontier<W: Write>(mut w: W, roots: &[Vec<u64>]) -> io::Result<()> {
    writeln!(w, "# unfinished search roots: one node per line, hex line masks")?;
    for root in roots {
        let parts: Vec<String> = root.iter().map(|m| format!("{m:x}")).collect();
        writeln!(w, "{}", parts.join(" "))?;
    }
    Ok(())
}

/// Reads a frontier written by [`write_frontier`].
pub fn read_frontier<R: BufRead>(r: R) -> Result<Vec<Vec<u64>>, FrontierError> {
    let mut roots = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut masks = Vec::new();
        for token in line.split_whitespace() {
            let m = u64::from_str_radix(token, 16).map_err(|_| FrontierError::BadMask {
                line: idx + 1,
                token: token.to_string(),
            })?;
            masks.push(m);
        }
        roots.push(masks);
    }
    Ok(roots)
}

/// One enumeration run's output.
#[derive(Debug)]
pub struct EnumerationRun {
    /// Emitted systems, sorted by mask vector (thread-count independent).
    pub systems: Vec<LineSystem>,
    pub stats: SearchStats,
    /// Roots whose subtrees were not finished before truncation; resuming
    /// with exactly these roots continues the run (re-finding any
    /// solutions already emitted from their partially-explored subtrees).
    /// Empty when the run was complete or truncated while still splitting.
    pub pending: Vec<Vec<u64>>,
}

/// Configurable enumeration: parameters, budget, emit cap, symmetry
/// normalization, split depth, and optional resume roots.
#[derive(Debug, Clone)]
pub struct GeometrySearch {
    params: OddGeometryParams,
    budget: SearchBudget,
    emit_limit: usize,
    break_symmetry: bool,
    split_depth: usize,
    resume: Option<Vec<Vec<u64>>>,
}

impl GeometrySearch {
    pub fn new(params: OddGeometryParams, budget: SearchBudget) -> Self {
        GeometrySearch {
            params,
            budget,
            emit_limit: 0,
            break_symmetry: true,
            split_depth: 2,
            resume: None,
        }
    }

    /// Caps the number of emitted systems; 0 means no cap.
    pub fn emit_limit(mut self, limit: usize) -> Self {
        self.emit_limit = limit;
        self
    }

    /// Pins the first line to {1..r} (on by default). Turning this off
    /// enumerates every nondecreasing solution sequence; the small-oracle
    /// tests compare the two runs.
    pub fn break_symmetry(mut self, on: bool) -> Self {
        self.break_symmetry = on;
        self
    }

    /// Depth at which the tree is split into worker roots.
    pub fn split_depth(mut self, depth: usize) -> Self {
        self.split_depth = depth.max(1);
        self
    }

    /// Continue from previously saved roots instead of the tree top.
    /// Shape errors in the roots are rejected here; feasibility is
    /// re-checked (and counted) when each root is picked up.
    pub fn resume(mut self, roots: Vec<Vec<u64>>) -> Result<Self, SearchError> {
        for root in &roots {
            PartialGeometry::from_lines(self.params.clone(), root)?;
        }
        self.resume = Some(roots);
        Ok(self)
    }

    pub fn run(&self) -> EnumerationRun {
        let start = Instant::now();
        let shared = Shared {
            max_nodes: self.budget.max_nodes,
            max_ms: self.budget.max_seconds.saturating_mul(1000),
            start,
            emit_limit: self.emit_limit,
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            reason: Mutex::new(Completion::Complete),
            sink: Mutex::new(Vec::new()),
            next_root: AtomicUsize::new(0),
            pending: Mutex::new(Vec::new()),
        };
        let mut stats = SearchStats::default();

        let (roots, trusted) = match &self.resume {
            Some(roots) => (roots.clone(), false),
            None => {
                let cutoff = self.split_depth.min(self.params.b);
                let mut pg = PartialGeometry::new(self.params.clone());
                let mut roots = Vec::new();
                let finished =
                    self.build_roots(&mut pg, cutoff, &mut roots, &mut stats, &shared);
                if !finished {
                    // Truncated while still splitting the tree: the collected
                    // roots are only part of the frontier, so nothing
                    // resumable can be reported.
                    stats.elapsed_ms = start.elapsed().as_millis() as u64;
                    stats.completion = *shared.reason.lock().unwrap();
                    return EnumerationRun {
                        systems: Vec::new(),
                        stats,
                        pending: Vec::new(),
                    };
                }
                (roots, true)
            }
        };

        let threads = self.budget.threads.min(roots.len().max(1));
        if threads <= 1 {
            let mut local = SearchStats::default();
            self.worker_loop(&roots, trusted, &shared, &mut local);
            stats.merge(&local);
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..threads)
                    .map(|_| {
                        let shared = &shared;
                        let roots = &roots;
                        scope.spawn(move || {
                            let mut local = SearchStats::default();
                            self.worker_loop(roots, trusted, shared, &mut local);
                            local
                        })
                    })
                    .collect();
                for handle in handles {
                    stats.merge(&handle.join().expect("worker panicked"));
                }
            });
        }

        let mut pending = shared.pending.into_inner().unwrap();
        if shared.stop.load(Ordering::SeqCst) {
            let idx = shared.next_root.load(Ordering::SeqCst).min(roots.len());
            pending.extend(roots[idx..].iter().cloned());
        }
        pending.sort();

        let mut systems = shared.sink.into_inner().unwrap();
        systems.sort();
        let systems = systems
            .into_iter()
            .map(|masks| {
                LineSystem::new(self.params.v, masks)
                    .expect("emitted masks stay inside the point range")
            })
            .collect();

        stats.completion = *shared.reason.lock().unwrap();
        stats.elapsed_ms = start.elapsed().as_millis() as u64;
        EnumerationRun {
            systems,
            stats,
            pending,
        }
    }

    /// First candidate mask at the current level, and whether it is the
    /// only one (the pinned first line).
    fn candidate_start(&self, pg: &PartialGeometry) -> Option<(u64, bool)> {
        let r = self.params.r;
        if pg.lines_placed() == 0 {
            Some((full_mask(r), self.break_symmetry))
        } else {
            let last = *pg.lines().last().unwrap();
            if self.params.allowed.contains(r) {
                // Repeated lines are legal (self-intersection size r).
                Some((last, false))
            } else {
                next_fitting(last, self.params.v).map(|c| (c, false))
            }
        }
    }

    /// Expands the tree to `cutoff` lines, collecting the prefixes.
    /// Returns false when stopped early.
    fn build_roots(
        &self,
        pg: &mut PartialGeometry,
        cutoff: usize,
        out: &mut Vec<Vec<u64>>,
        local: &mut SearchStats,
        shared: &Shared,
    ) -> bool {
        let depth = pg.lines_placed();
        if depth == cutoff {
            out.push(pg.lines().to_vec());
            return true;
        }
        let (mut cand, single) = match self.candidate_start(pg) {
            Some(s) => s,
            None => return true,
        };
        if depth == 0 && self.break_symmetry {
            // The skipped sibling first lines, accounted without visits.
            local.prunes.symmetry +=
                binomial(self.params.v as u64, self.params.r as u64).saturating_sub(1);
        }
        loop {
            if shared.stopped() || !shared.take_node() {
                return false;
            }
            local.nodes_visited += 1;
            shared.time_check(local.nodes_visited);
            if pg.try_place(cand, &mut local.prunes) {
                local.deepest_level = local.deepest_level.max(depth + 1);
                let finished = self.build_roots(pg, cutoff, out, local, shared);
                pg.unplace();
                if !finished {
                    return false;
                }
            }
            if single {
                break;
            }
            cand = match next_fitting(cand, self.params.v) {
                Some(c) => c,
                None => break,
            };
        }
        true
    }

    fn worker_loop(
        &self,
        roots: &[Vec<u64>],
        trusted: bool,
        shared: &Shared,
        local: &mut SearchStats,
    ) {
        loop {
            if shared.stopped() {
                return;
            }
            let idx = shared.next_root.fetch_add(1, Ordering::SeqCst);
            if idx >= roots.len() {
                return;
            }
            let root = &roots[idx];
            let mut pg = PartialGeometry::new(self.params.clone());
            let mut feasible = true;
            for &mask in root {
                if trusted {
                    pg.force_place(mask);
                } else {
                    // Resumed roots get the full (counted) re-check.
                    if shared.stopped() || !shared.take_node() {
                        shared.pending.lock().unwrap().push(root.clone());
                        return;
                    }
                    local.nodes_visited += 1;
                    if !pg.try_place(mask, &mut local.prunes) {
                        feasible = false;
                        break;
                    }
                }
            }
            if !feasible {
                continue;
            }
            local.deepest_level = local.deepest_level.max(pg.lines_placed());
            if !self.dfs(&mut pg, shared, local) {
                shared.pending.lock().unwrap().push(root.clone());
            }
        }
    }

    /// Explores the subtree under `pg` to full depth. Returns false when
    /// stopped before the subtree was exhausted.
    fn dfs(&self, pg: &mut PartialGeometry, shared: &Shared, local: &mut SearchStats) -> bool {
        let depth = pg.lines_placed();
        if depth == self.params.b {
            if pg.completion_valid() {
                if shared.emit(pg.lines()) {
                    local.solutions_found += 1;
                }
            } else {
                local.prunes.codegree += 1;
            }
            return true;
        }
        let (mut cand, single) = match self.candidate_start(pg) {
            Some(s) => s,
            None => return true,
        };
        debug_assert!(depth > 0, "workers start below the pinned first level");
        loop {
            if shared.stopped() || !shared.take_node() {
                return false;
            }
            local.nodes_visited += 1;
            shared.time_check(local.nodes_visited);
            if pg.try_place(cand, &mut local.prunes) {
                local.deepest_level = local.deepest_level.max(depth + 1);
                let finished = self.dfs(pg, shared, local);
                pg.unplace();
                if !finished {
                    return false;
                }
            }
            if single {
                break;
            }
            cand = match next_fitting(cand, self.params.v) {
                Some(c) => c,
                None => break,
            };
        }
        true
    }
}

struct Shared {
    max_nodes: u64,
    max_ms: u64,
    start: Instant,
    emit_limit: usize,
    nodes: AtomicU64,
    stop: AtomicBool,
    reason: Mutex<Completion>,
    sink: Mutex<Vec<Vec<u64>>>,
    next_root: AtomicUsize,
    pending: Mutex<Vec<Vec<u64>>>,
}

impl Shared {
    fn stopped(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }

    fn flag(&self, reason: Completion) {
        let mut slot = self.reason.lock().unwrap();
        *slot = (*slot).max(reason);
        self.stop.store(true, Ordering::SeqCst);
    }

    /// Claims one candidate evaluation against the shared node budget.
    fn take_node(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed);
        if n >= self.max_nodes {
            self.flag(Completion::NodeBudget);
            return false;
        }
        true
    }

    fn time_check(&self, local_nodes: u64) {
        if local_nodes.is_multiple_of(4096)
            && self.start.elapsed().as_millis() as u64 > self.max_ms
        {
            self.flag(Completion::TimeBudget);
        }
    }

    /// Appends a solution unless the emit cap is already reached.
    fn emit(&self, lines: &[u64]) -> bool {
        let mut sink = self.sink.lock().unwrap();
        if self.emit_limit > 0 && sink.len() >= self.emit_limit {
            return false;
        }
        sink.push(lines.to_vec());
        if self.emit_limit > 0 && sink.len() >= self.emit_limit {
            self.flag(Completion::EmitLimit);
        }
        true
    }
}

/// Enumerates systems matching the parameters, with the default
/// normalization (pinned first line) and the given emit cap (0 = no cap).
pub fn enumerate_geometries(
    params: &OddGeometryParams,
    budget: &SearchBudget,
    emit_limit: usize,
) -> (Vec<LineSystem>, SearchStats) {
    let run = GeometrySearch::new(params.clone(), budget.clone())
        .emit_limit(emit_limit)
        .run();
    (run.systems, run.stats)
}
