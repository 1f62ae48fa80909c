//! Loose-cycle detection and exact copy counting.
//!
//! A loose cycle with `l` edges has consecutive edges meeting in exactly
//! one vertex, all link vertices distinct, and all other edge pairs
//! disjoint. Detection backtracks over edge sequences with exact
//! intersection constraints; counting anchors each copy at its minimum
//! edge id and halves the directed traversals.

use super::{View, Witness};
use crate::hypergraph::Hypergraph;

/// Finds a loose `ell`-cycle occurring in `h` as an explicit embedding.
pub fn contains_loose_cycle(h: &Hypergraph, ell: usize) -> Option<Witness> {
    find(View::full(h), ell, None)
}

/// Exact number of (unordered) loose `ell`-cycle copies.
pub fn count_loose_cycles(h: &Hypergraph, ell: usize) -> usize {
    if ell < 3 {
        return 0;
    }
    let mut count = 0usize;
    let view = View::full(h);
    for e1 in 0..h.edge_count() {
        walk(view, ell, e1, true, &mut |_, _| {
            count += 1;
            false
        });
    }
    debug_assert!(count % 2 == 0, "each copy is traversed once per direction");
    count / 2
}

/// Visits every copy among the live edges as a sorted edge-id set (each
/// copy twice, once per direction; callers dedupe). The visitor returns
/// `true` to stop early.
pub(crate) fn collect_copies(
    view: View<'_>,
    ell: usize,
    visit: &mut impl FnMut(Vec<usize>) -> bool,
) {
    if ell < 3 {
        return;
    }
    let starts: Vec<usize> = view.live_edges().collect();
    for e1 in starts {
        let stopped = walk(view, ell, e1, true, &mut |edges, _links| {
            let mut ids = edges.to_vec();
            ids.sort_unstable();
            visit(ids)
        });
        if stopped {
            return;
        }
    }
}

pub(crate) fn find(view: View<'_>, ell: usize, required: Option<usize>) -> Option<Witness> {
    if ell < 3 || view.live_count() < ell {
        return None;
    }
    let starts: Vec<usize> = match required {
        Some(e) if view.is_alive(e) => vec![e],
        Some(_) => return None,
        None => view.live_edges().collect(),
    };
    let mut found = None;
    for e1 in starts {
        walk(view, ell, e1, false, &mut |edges, links| {
            found = Some(Witness::LooseCycle { edges: edges.to_vec(), links: links.to_vec() });
            true
        });
        if found.is_some() {
            break;
        }
    }
    found
}

/// Enumerates loose cycles through `start` as `e_1`; with `ascending`, all
/// later edges must have larger ids (so each copy is reported exactly
/// twice, once per direction). The visitor returns `true` to stop.
fn walk(
    view: View<'_>,
    ell: usize,
    start: usize,
    ascending: bool,
    visit: &mut impl FnMut(&[usize], &[usize]) -> bool,
) -> bool {
    if !view.is_alive(start) {
        return false;
    }
    let mut edges = vec![start];
    let mut links: Vec<usize> = Vec::with_capacity(ell);
    extend(view, ell, ascending, &mut edges, &mut links, visit)
}

fn extend(
    view: View<'_>,
    ell: usize,
    ascending: bool,
    edges: &mut Vec<usize>,
    links: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize], &[usize]) -> bool,
) -> bool {
    let h = view.h;
    let depth = edges.len();
    if depth == ell {
        // close the cycle: the last edge must meet the first in exactly one
        // fresh vertex (its disjointness from interior edges is enforced
        // when it was chosen)
        let inter = h.edge_intersection(edges[ell - 1], edges[0]);
        if inter.len() == 1 && !links.contains(&inter[0]) {
            links.push(inter[0]);
            let stop = visit(edges, links);
            links.pop();
            return stop;
        }
        return false;
    }
    let last = edges[depth - 1];
    let candidates: Vec<usize> = h
        .edge(last)
        .iter()
        .flat_map(|&v| view.live_incident(v))
        .filter(|&f| f != last)
        .collect();
    let mut tried: Vec<usize> = Vec::new();
    for f in candidates {
        if tried.contains(&f) || edges.contains(&f) {
            continue;
        }
        tried.push(f);
        if ascending && f < edges[0] {
            continue;
        }
        let inter = h.edge_intersection(last, f);
        if inter.len() != 1 || links.contains(&inter[0]) {
            continue;
        }
        // non-consecutive edges must be disjoint; when f is the closing
        // edge its intersection with e_1 is checked at closing time
        let lo = if depth + 1 == ell { 1 } else { 0 };
        let interior_ok =
            edges[lo..depth - 1].iter().all(|&g| h.edge_intersection(g, f).is_empty());
        if !interior_ok {
            continue;
        }
        edges.push(f);
        links.push(inter[0]);
        let stop = extend(view, ell, ascending, edges, links, visit);
        links.pop();
        edges.pop();
        if stop {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hosts::{complete, loose_cycle, sunflower};

    #[test]
    fn detects_itself() {
        for ell in 3..=5 {
            let h = loose_cycle(ell, 3);
            let w = contains_loose_cycle(&h, ell).expect("cycle contains itself");
            assert!(w.validate(&h));
            assert_eq!(count_loose_cycles(&h, ell), 1);
        }
    }

    #[test]
    fn sunflowers_have_no_loose_cycles() {
        let h = sunflower(6, 1, 3);
        for ell in 3..=6 {
            assert!(contains_loose_cycle(&h, ell).is_none());
            assert_eq!(count_loose_cycles(&h, ell), 0);
        }
    }

    #[test]
    fn complete_host_has_loose_triangles() {
        let h = complete(6, 3);
        let w = contains_loose_cycle(&h, 3).expect("K_6^3 has a loose triangle");
        assert!(w.validate(&h));
    }

    #[test]
    fn matching_host_counts_zero() {
        let m = crate::hypergraph::Hypergraph::new(
            3,
            9,
            vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]],
        )
        .unwrap();
        assert_eq!(count_loose_cycles(&m, 3), 0);
    }
}
