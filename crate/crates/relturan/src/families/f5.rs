//! The four-edge 3-graph on six vertices built from two pair-sharing edge
//! pairs joined crosswise by single vertices, and its exact copy count.
//!
//! With vertices `u1 u2 u3 v1 v2 v3 = 0..6`, the edges are
//! `{u1,u2,u3}, {u1,u2,v1}, {v1,v2,v3}, {u3,v2,v3}`.

use super::{subiso, View, Witness};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// The fixed pattern; every detection and count refers to this graph.
pub fn pattern() -> Hypergraph {
    Hypergraph::new(
        3,
        6,
        vec![vec![0, 1, 2], vec![0, 1, 3], vec![3, 4, 5], vec![2, 4, 5]],
    )
    .expect("pattern is well formed")
}

/// Detects one copy, returned as an explicit embedding.
pub fn contains_f5(h: &Hypergraph) -> Result<Option<Witness>> {
    if h.uniformity() != 3 {
        return Err(Error::invalid("the pattern is 3-uniform"));
    }
    Ok(subiso::find_embedding(View::full(h), &pattern(), None))
}

/// Exact number of unordered copies.
///
/// Copies are enumerated as ordered tuples `(f1, f2, f3, f4)` with
/// `|f1∩f2| = 2`, `f3` meeting `f2` exactly in the vertex `f2 \ f1` and
/// disjoint from `f1`, and `f4 = (f3 \ f2) ∪ (f1 \ f2)` looked up directly;
/// each copy yields exactly four such tuples.
pub fn count_f5(h: &Hypergraph) -> Result<usize> {
    if h.uniformity() != 3 {
        return Err(Error::invalid("the pattern is 3-uniform"));
    }
    let m = h.edge_count();
    let mut tuples = 0usize;
    for f1 in 0..m {
        for f2 in h.neighbors_of_edge(f1) {
            let shared = h.edge_intersection(f1, f2);
            if shared.len() != 2 {
                continue;
            }
            let v1 = *h.edge(f2).iter().find(|v| !shared.contains(v)).unwrap();
            let u3 = *h.edge(f1).iter().find(|v| !shared.contains(v)).unwrap();
            for &f3 in h.incident(v1) {
                if f3 == f1 || f3 == f2 {
                    continue;
                }
                if h.edge_intersection(f3, f2).len() != 1 {
                    continue;
                }
                if !h.edge_intersection(f3, f1).is_empty() {
                    continue;
                }
                let mut f4: Vec<usize> =
                    h.edge(f3).iter().copied().filter(|&v| v != v1).collect();
                f4.push(u3);
                if let Some(id) = h.edge_id(&f4) {
                    debug_assert!(id != f1 && id != f2 && id != f3);
                    tuples += 1;
                }
            }
        }
    }
    debug_assert!(tuples % 4 == 0, "each copy yields four ordered tuples");
    Ok(tuples / 4)
}

/// Collects copies among live edges as sorted 4-element edge-id sets
/// (each copy appears four times; callers dedupe).
pub(crate) fn collect_copies(h: &Hypergraph, alive: &[bool], out: &mut Vec<Vec<usize>>) {
    let m = h.edge_count();
    for f1 in 0..m {
        if !alive[f1] {
            continue;
        }
        for f2 in h.neighbors_of_edge(f1) {
            if !alive[f2] {
                continue;
            }
            let shared = h.edge_intersection(f1, f2);
            if shared.len() != 2 {
                continue;
            }
            let v1 = *h.edge(f2).iter().find(|v| !shared.contains(v)).unwrap();
            let u3 = *h.edge(f1).iter().find(|v| !shared.contains(v)).unwrap();
            for &f3 in h.incident(v1) {
                if !alive[f3] || f3 == f1 || f3 == f2 {
                    continue;
                }
                if h.edge_intersection(f3, f2).len() != 1
                    || !h.edge_intersection(f3, f1).is_empty()
                {
                    continue;
                }
                let mut f4: Vec<usize> =
                    h.edge(f3).iter().copied().filter(|&v| v != v1).collect();
                f4.push(u3);
                if let Some(id) = h.edge_id(&f4) {
                    if alive[id] {
                        let mut ids = vec![f1, f2, f3, id];
                        ids.sort_unstable();
                        out.push(ids);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hosts::complete;

    #[test]
    fn pattern_counts_itself_once() {
        let p = pattern();
        assert_eq!(count_f5(&p).unwrap(), 1);
        assert!(contains_f5(&p).unwrap().is_some());
    }

    #[test]
    fn linear_hosts_have_no_copies() {
        let fano = crate::hosts::fano();
        assert_eq!(count_f5(&fano).unwrap(), 0);
        assert!(contains_f5(&fano).unwrap().is_none());
    }

    #[test]
    fn complete_host_count_matches_naive_enumeration() {
        let h = complete(6, 3);
        let naive = crate::families::naive::count_f5_naive(&h);
        assert_eq!(count_f5(&h).unwrap(), naive);
        assert!(naive > 0);

        let h7 = complete(7, 3);
        assert_eq!(count_f5(&h7).unwrap(), crate::families::naive::count_f5_naive(&h7));
    }

    #[test]
    fn rejects_wrong_uniformity() {
        let g = complete(5, 2);
        assert!(count_f5(&g).is_err());
        assert!(contains_f5(&g).is_err());
    }

    #[test]
    fn pattern_is_a_nonsunflower_berge_four_cycle() {
        let p = pattern();
        let w = crate::families::berge::find_berge_cycle(&p, 4, true);
        assert!(w.is_some());
    }
}
