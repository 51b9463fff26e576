//! Relabeling-invariant certificates and exact isomorphism testing for
//! line systems.
//!
//! [`canonical_key`] is a hash-quality certificate: systems that differ
//! only by renaming points (and reordering lines) always get the same key,
//! and the iterated color refinement it is built on separates systems of
//! different structure in practice. [`are_isomorphic`] is the exact
//! backtracking decision procedure, used where a guarantee is needed.

use std::collections::BTreeMap;

use crate::geometry::LineSystem;

type PointDesc = (u64, Vec<u64>);
type LineDesc = (u64, Vec<u64>, Vec<(u64, u32)>);

/// One round of color refinement. Returns the dense re-indexed colors.
fn refine(
    masks: &[u64],
    v: usize,
    pcol: &[u64],
    lcol: &[u64],
) -> (Vec<PointDesc>, Vec<LineDesc>, Vec<u64>, Vec<u64>) {
    let b = masks.len();
    let pdesc: Vec<PointDesc> = (0..v)
        .map(|p| {
            let mut incident: Vec<u64> = (0..b)
                .filter(|&i| masks[i] >> p & 1 == 1)
                .map(|i| lcol[i])
                .collect();
            incident.sort_unstable();
            (pcol[p], incident)
        })
        .collect();
    let ldesc: Vec<LineDesc> = (0..b)
        .map(|i| {
            let mut members: Vec<u64> = (0..v)
                .filter(|&p| masks[i] >> p & 1 == 1)
                .map(|p| pcol[p])
                .collect();
            members.sort_unstable();
            let mut crossings: Vec<(u64, u32)> = (0..b)
                .filter(|&j| j != i)
                .map(|j| (lcol[j], (masks[i] & masks[j]).count_ones()))
                .collect();
            crossings.sort_unstable();
            (lcol[i], members, crossings)
        })
        .collect();

    let mut pmap: BTreeMap<&PointDesc, u64> = BTreeMap::new();
    for d in &pdesc {
        pmap.entry(d).or_insert(0);
    }
    for (i, slot) in pmap.values_mut().enumerate() {
        *slot = i as u64;
    }
    let new_pcol: Vec<u64> = pdesc.iter().map(|d| pmap[d]).collect();

    let mut lmap: BTreeMap<&LineDesc, u64> = BTreeMap::new();
    for d in &ldesc {
        lmap.entry(d).or_insert(0);
    }
    for (i, slot) in lmap.values_mut().enumerate() {
        *slot = i as u64;
    }
    let new_lcol: Vec<u64> = ldesc.iter().map(|d| lmap[d]).collect();

    (pdesc, ldesc, new_pcol, new_lcol)
}

/// Relabeling-invariant certificate string for a line system.
///
/// Two systems that are isomorphic (same structure up to renaming points)
/// always produce the same key, so keys can be collected into multisets
/// and compared across runs regardless of point labels or line order.
pub fn canonical_key(ls: &LineSystem) -> String {
    let v = ls.point_count();
    let masks = ls.masks();
    let b = masks.len();

    let mut pcol: Vec<u64> = (0..v)
        .map(|p| masks.iter().filter(|&&m| m >> p & 1 == 1).count() as u64)
        .collect();
    let mut lcol: Vec<u64> = masks.iter().map(|m| m.count_ones() as u64).collect();

    let mut pdesc;
    let mut ldesc;
    loop {
        let (pd, ld, new_pcol, new_lcol) = refine(masks, v, &pcol, &lcol);
        pdesc = pd;
        ldesc = ld;
        let stable = new_pcol == pcol && new_lcol == lcol;
        pcol = new_pcol;
        lcol = new_lcol;
        if stable {
            break;
        }
    }

    // The sorted descriptor multisets are label-free; the dense color ids
    // they mention were assigned in descriptor order, so they correspond
    // across isomorphic systems.
    pdesc.sort_unstable();
    ldesc.sort_unstable();
    let mut key = format!("v{v};b{b};P");
    for (c, inc) in &pdesc {
        key.push_str(&format!("({c}:{inc:?})"));
    }
    key.push_str(";L");
    for (c, members, crossings) in &ldesc {
        key.push_str(&format!("({c}:{members:?}:{crossings:?})"));
    }
    key
}

/// Point signatures induced by a line bijection: for each point, the
/// sorted list of image line indices through it. The bijection extends to
/// a point relabeling exactly when the two signature multisets agree.
fn columns_match(am: &[u64], bm: &[u64], map: &[usize], v: usize) -> bool {
    let n = am.len();
    let mut asig: Vec<Vec<usize>> = (0..v)
        .map(|p| {
            let mut s: Vec<usize> = (0..n).filter(|&i| am[i] >> p & 1 == 1).map(|i| map[i]).collect();
            s.sort_unstable();
            s
        })
        .collect();
    let mut bsig: Vec<Vec<usize>> = (0..v)
        .map(|q| (0..n).filter(|&j| bm[j] >> q & 1 == 1).collect())
        .collect();
    asig.sort_unstable();
    bsig.sort_unstable();
    asig == bsig
}

fn extend(
    i: usize,
    am: &[u64],
    bm: &[u64],
    v: usize,
    used: &mut [bool],
    map: &mut [usize],
) -> bool {
    let n = am.len();
    if i == n {
        return columns_match(am, bm, map, v);
    }
    for j in 0..n {
        if used[j] || bm[j].count_ones() != am[i].count_ones() {
            continue;
        }
        let consistent = (0..i).all(|k| {
            (am[i] & am[k]).count_ones() == (bm[j] & bm[map[k]]).count_ones()
        });
        if !consistent {
            continue;
        }
        map[i] = j;
        used[j] = true;
        if extend(i + 1, am, bm, v, used, map) {
            return true;
        }
        used[j] = false;
        map[i] = usize::MAX;
    }
    false
}

/// Exact isomorphism test: true when some renaming of points (with lines
/// matched as a multiset) carries one system onto the other.
pub fn are_isomorphic(a: &LineSystem, b: &LineSystem) -> bool {
    let v = a.point_count();
    if v != b.point_count() || a.line_count() != b.line_count() {
        return false;
    }
    let am = a.masks();
    let bm = b.masks();

    let sorted_sizes = |m: &[u64]| {
        let mut s: Vec<u32> = m.iter().map(|x| x.count_ones()).collect();
        s.sort_unstable();
        s
    };
    if sorted_sizes(am) != sorted_sizes(bm) {
        return false;
    }
    let sorted_degrees = |m: &[u64]| {
        let mut d: Vec<usize> = (0..v)
            .map(|p| m.iter().filter(|&&x| x >> p & 1 == 1).count())
            .collect();
        d.sort_unstable();
        d
    };
    if sorted_degrees(am) != sorted_degrees(bm) {
        return false;
    }

    let mut used = vec![false; am.len()];
    let mut map = vec![usize::MAX; am.len()];
    extend(0, am, bm, v, &mut used, &mut map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::LineSystem;
    use crate::testutil::{fano, i3_pattern};

    /// Fano with points renamed by p -> 2p mod 7 (7 -> 7).
    fn relabeled_fano() -> LineSystem {
        let perm = [2, 4, 6, 1, 3, 5, 7]; // image of point i+1
        let masks: Vec<u64> = fano()
            .masks()
            .iter()
            .map(|&m| {
                let mut out = 0u64;
                for (p, &image) in perm.iter().enumerate() {
                    if m >> p & 1 == 1 {
                        out |= 1 << (image - 1);
                    }
                }
                out
            })
            .collect();
        LineSystem::new(7, masks).unwrap()
    }

    /// Seven cyclic consecutive triples: same shape numbers as the Fano
    /// plane but different pairwise structure.
    fn cyclic_triples() -> LineSystem {
        let lists: Vec<Vec<usize>> = (0..7)
            .map(|i| {
                let mut l = vec![i % 7 + 1, (i + 1) % 7 + 1, (i + 2) % 7 + 1];
                l.sort_unstable();
                l
            })
            .collect();
        LineSystem::from_point_lists(7, &lists).unwrap()
    }

    #[test]
    fn key_is_stable_under_relabeling() {
        assert_eq!(canonical_key(&fano()), canonical_key(&relabeled_fano()));
    }

    #[test]
    fn key_is_deterministic() {
        assert_eq!(canonical_key(&fano()), canonical_key(&fano()));
    }

    #[test]
    fn key_separates_different_structures() {
        assert_ne!(canonical_key(&fano()), canonical_key(&cyclic_triples()));
        assert_ne!(canonical_key(&fano()), canonical_key(&i3_pattern()));
    }

    #[test]
    fn isomorphism_accepts_relabelings() {
        assert!(are_isomorphic(&fano(), &relabeled_fano()));
        assert!(are_isomorphic(&fano(), &fano()));
    }

    #[test]
    fn isomorphism_rejects_different_structures() {
        assert!(!are_isomorphic(&fano(), &cyclic_triples()));
        assert!(!are_isomorphic(&fano(), &i3_pattern()));
    }

    #[test]
    fn fano_is_self_dual() {
        let dual = fano().dual().unwrap();
        assert!(are_isomorphic(&fano(), &dual));
        assert_eq!(canonical_key(&fano()), canonical_key(&dual));
    }

    #[test]
    fn repeated_lines_are_matched_as_a_multiset() {
        let a = LineSystem::from_point_lists(4, &[vec![1, 2], vec![1, 2], vec![3, 4]]).unwrap();
        let b = LineSystem::from_point_lists(4, &[vec![1, 2], vec![3, 4], vec![3, 4]]).unwrap();
        let c = LineSystem::from_point_lists(4, &[vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap();
        assert!(are_isomorphic(&a, &b));
        assert_eq!(canonical_key(&a), canonical_key(&b));
        assert!(!are_isomorphic(&a, &c));
        assert_ne!(canonical_key(&a), canonical_key(&c));
    }
}
