//! Definition-level reference detectors.
//!
//! Everything here enumerates directly from the definitions (edge subsets,
//! vertex tuples, permutations) with no shared code or pruning tricks from
//! the production detectors; test suites cross-validate against these.

use itertools::Itertools;

use crate::families::ForbiddenFamily;
use crate::hypergraph::{combinations, Hypergraph};

/// Exists `ell` distinct edges and `ell` distinct vertices with
/// `v_i, v_{i+1} ∈ e_i` cyclically; optionally skipping witnesses whose
/// edge set is a sunflower.
pub fn berge_cycle_naive(h: &Hypergraph, ell: usize, forbid_sunflower: bool) -> bool {
    if ell < 2 || h.edge_count() < ell {
        return false;
    }
    let ids: Vec<usize> = (0..h.edge_count()).collect();
    for subset in combinations(&ids, ell) {
        if forbid_sunflower && pairwise_constant_intersection(h, &subset) {
            continue;
        }
        for perm in subset.iter().copied().permutations(ell) {
            if core_set_exists(h, &perm) {
                return true;
            }
        }
    }
    false
}

fn pairwise_constant_intersection(h: &Hypergraph, ids: &[usize]) -> bool {
    if ids.len() < 2 {
        return true;
    }
    let k = h.edge_intersection(ids[0], ids[1]);
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            if h.edge_intersection(ids[i], ids[j]) != k {
                return false;
            }
        }
    }
    true
}

/// Tries to pick distinct core vertices for the given edge order:
/// `v_i ∈ e_{i-1} ∩ e_i` and `v_1 ∈ e_l ∩ e_1`.
fn core_set_exists(h: &Hypergraph, edges: &[usize]) -> bool {
    let l = edges.len();
    fn rec(h: &Hypergraph, edges: &[usize], i: usize, core: &mut Vec<usize>) -> bool {
        let l = edges.len();
        if i == l {
            return true;
        }
        // v_{i+1} lies in e_i and e_{i+1} (cyclically); in 0-based terms
        // core[i] lies in edges[(i + l - 1) % l] and edges[i]
        let prev = edges[(i + l - 1) % l];
        let cur = edges[i];
        let candidates = h.edge_intersection(prev, cur);
        for v in candidates {
            if core.contains(&v) {
                continue;
            }
            core.push(v);
            if rec(h, edges, i + 1, core) {
                return true;
            }
            core.pop();
        }
        false
    }
    rec(h, edges, 0, &mut Vec::with_capacity(l))
}

/// Loose `ell`-cycle copy count by brute force over edge subsets: a subset
/// counts when some cyclic order of it realizes the exact intersection
/// pattern.
pub fn count_loose_cycles_naive(h: &Hypergraph, ell: usize) -> usize {
    if ell < 3 || h.edge_count() < ell {
        return 0;
    }
    let ids: Vec<usize> = (0..h.edge_count()).collect();
    let mut count = 0;
    for subset in combinations(&ids, ell) {
        let mut found = false;
        'perms: for perm in subset.iter().copied().permutations(ell) {
            if perm[0] != subset[0] {
                continue; // fixing the rotation is enough
            }
            let mut links = Vec::with_capacity(ell);
            for i in 0..ell {
                let inter = h.edge_intersection(perm[i], perm[(i + 1) % ell]);
                if inter.len() != 1 || links.contains(&inter[0]) {
                    continue 'perms;
                }
                links.push(inter[0]);
            }
            for i in 0..ell {
                for j in i + 1..ell {
                    if j != i + 1 && !(i == 0 && j == ell - 1)
                        && !h.edge_intersection(perm[i], perm[j]).is_empty()
                    {
                        continue 'perms;
                    }
                }
            }
            found = true;
            break;
        }
        if found {
            count += 1;
        }
    }
    count
}

pub fn loose_cycle_naive(h: &Hypergraph, ell: usize) -> bool {
    count_loose_cycles_naive(h, ell) > 0
}

/// Copy count of the fixed four-edge pattern by enumerating ordered vertex
/// 6-tuples and dividing by the pattern's automorphism count: each copy
/// admits 4 valid edge orderings, and each ordering is stabilized by the
/// two independent swaps `u1 <-> u2` and `v2 <-> v3`, giving 16 labelings.
pub fn count_f5_naive(h: &Hypergraph) -> usize {
    let n = h.vertex_count();
    let mut embeddings = 0usize;
    let has = |verts: &[usize]| h.edge_id(verts).is_some();
    for tuple in (0..n).permutations(6) {
        let (u1, u2, u3, v1, v2, v3) =
            (tuple[0], tuple[1], tuple[2], tuple[3], tuple[4], tuple[5]);
        if has(&[u1, u2, u3]) && has(&[u1, u2, v1]) && has(&[v1, v2, v3]) && has(&[u3, v2, v3]) {
            embeddings += 1;
        }
    }
    debug_assert!(embeddings % 16 == 0);
    embeddings / 16
}

/// Membership in the sunflower-plus family straight from the definition:
/// removing some edge leaves a sunflower on `2..=ell` edges whose kernel
/// the removed edge meets, and the whole is not a sunflower.
pub fn sunflower_plus_member_naive(h: &Hypergraph, ell: usize) -> bool {
    let m = h.edge_count();
    if m < 3 || m > ell + 1 {
        return false;
    }
    let all: Vec<usize> = (0..m).collect();
    if pairwise_constant_intersection(h, &all) {
        return false;
    }
    for extra in 0..m {
        let rest: Vec<usize> = (0..m).filter(|&i| i != extra).collect();
        if !pairwise_constant_intersection(h, &rest) {
            continue;
        }
        let kernel = h.edge_intersection(rest[0], rest[1]);
        let meets = h
            .edge(extra)
            .iter()
            .any(|v| kernel.binary_search(v).is_ok());
        if meets {
            return true;
        }
    }
    false
}

/// Does any edge subset of `h` form a sunflower-plus member with sunflower
/// part of size at most `ell`?
pub fn sunflower_plus_subgraph_naive(h: &Hypergraph, ell: usize) -> bool {
    let ids: Vec<usize> = (0..h.edge_count()).collect();
    for size in 3..=(ell + 1).min(h.edge_count()) {
        for subset in combinations(&ids, size) {
            if sunflower_plus_member_naive(&h.subgraph(&subset), ell) {
                return true;
            }
        }
    }
    false
}

/// Exact maximum family-free edge count by scanning all edge subsets.
pub fn max_family_free_naive(h: &Hypergraph, family: &ForbiddenFamily) -> usize {
    let m = h.edge_count();
    assert!(m <= 20, "subset scan is exponential");
    let mut best = 0;
    for mask in 0u32..(1u32 << m) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let ids: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
        if family.is_free(&h.subgraph(&ids)) {
            best = size;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hosts::{loose_cycle, sunflower};

    #[test]
    fn naive_agrees_on_fixtures() {
        let c4 = loose_cycle(4, 3);
        assert!(berge_cycle_naive(&c4, 4, false));
        assert!(!berge_cycle_naive(&c4, 2, false));
        assert!(loose_cycle_naive(&c4, 4));
        assert_eq!(count_loose_cycles_naive(&c4, 4), 1);

        let sf = sunflower(4, 2, 3);
        assert!(berge_cycle_naive(&sf, 2, false));
        assert!(!berge_cycle_naive(&sf, 2, true));
        assert!(!loose_cycle_naive(&sf, 3));
        assert!(!sunflower_plus_subgraph_naive(&sf, 4));
    }
}
