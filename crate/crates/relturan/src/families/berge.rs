//! Berge-cycle detection via core sets.
//!
//! A Berge cycle of length `l` is certified by distinct vertices
//! `v_1..v_l` and distinct edges `e_1..e_l` with `v_i, v_{i+1} ∈ e_i`
//! cyclically. The search walks alternating vertex/edge sequences with
//! visited sets, optionally anchored at a required edge (every witness has
//! a rotation starting at any of its edges, so anchoring stays complete).

use super::{sunflower, View, Witness};
use crate::hypergraph::Hypergraph;

/// Finds a Berge `ell`-cycle; with `forbid_sunflower`, only witnesses whose
/// edge set is not a sunflower are reported.
pub fn find_berge_cycle(
    h: &Hypergraph,
    ell: usize,
    forbid_sunflower: bool,
) -> Option<Witness> {
    find(View::full(h), ell, forbid_sunflower, None)
}

/// Smallest `l` in `2..=l_max` with a Berge l-cycle, `None` when the girth
/// exceeds `l_max + 1`.
pub fn girth_up_to(h: &Hypergraph, l_max: usize) -> Option<usize> {
    (2..=l_max).find(|&l| find(View::full(h), l, false, None).is_some())
}

pub(crate) fn find(
    view: View<'_>,
    ell: usize,
    forbid_sunflower: bool,
    required: Option<usize>,
) -> Option<Witness> {
    if ell < 2 || view.live_count() < ell {
        return None;
    }
    let starts: Vec<usize> = match required {
        Some(e) if view.is_alive(e) => vec![e],
        Some(_) => return None,
        None => view.live_edges().collect(),
    };
    let mut state = Search {
        view,
        ell,
        forbid_sunflower,
        edges: Vec::with_capacity(ell),
        core: Vec::with_capacity(ell),
        edge_used: vec![false; view.h.edge_count()],
        vertex_used: vec![false; view.h.vertex_count()],
    };
    for e1 in starts {
        let verts = view.h.edge(e1).to_vec();
        for &v1 in &verts {
            for &v2 in &verts {
                if v1 == v2 {
                    continue;
                }
                state.edges.push(e1);
                state.edge_used[e1] = true;
                state.core.push(v1);
                state.core.push(v2);
                state.vertex_used[v1] = true;
                state.vertex_used[v2] = true;
                let found = state.extend();
                state.vertex_used[v1] = false;
                state.vertex_used[v2] = false;
                state.core.clear();
                state.edge_used[e1] = false;
                state.edges.clear();
                if let Some(w) = found {
                    return Some(w);
                }
            }
        }
    }
    None
}

struct Search<'a> {
    view: View<'a>,
    ell: usize,
    forbid_sunflower: bool,
    edges: Vec<usize>,
    core: Vec<usize>,
    edge_used: Vec<bool>,
    vertex_used: Vec<bool>,
}

impl Search<'_> {
    /// Extends the partial sequence; `core` holds one more vertex than
    /// `edges` spans, and the next edge continues from `core.last()`.
    fn extend(&mut self) -> Option<Witness> {
        if self.core.len() == self.ell {
            return self.close();
        }
        let tail = *self.core.last().unwrap();
        let candidates: Vec<usize> = self.view.live_incident(tail).collect();
        for e in candidates {
            if self.edge_used[e] {
                continue;
            }
            let verts = self.view.h.edge(e).to_vec();
            for &w in &verts {
                if self.vertex_used[w] {
                    continue;
                }
                self.edges.push(e);
                self.edge_used[e] = true;
                self.core.push(w);
                self.vertex_used[w] = true;
                let found = self.extend();
                self.vertex_used[w] = false;
                self.core.pop();
                self.edge_used[e] = false;
                self.edges.pop();
                if found.is_some() {
                    return found;
                }
            }
        }
        None
    }

    /// The core is complete; look for a closing edge containing both the
    /// last and the first core vertex.
    fn close(&mut self) -> Option<Witness> {
        let first = self.core[0];
        let last = *self.core.last().unwrap();
        let candidates: Vec<usize> = self.view.live_incident(last).collect();
        for e in candidates {
            if self.edge_used[e] || !self.view.h.edge(e).contains(&first) {
                continue;
            }
            let mut edges = self.edges.clone();
            edges.push(e);
            if self.forbid_sunflower && sunflower::edge_set_kernel(self.view.h, &edges).is_some() {
                continue;
            }
            return Some(Witness::BergeCycle { core: self.core.clone(), edges });
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{ForbiddenFamily, Witness};
    use crate::hosts::{fano, loose_cycle, sunflower as sunflower_host};
    use crate::hypergraph::Hypergraph;

    #[test]
    fn loose_cycle_is_a_berge_cycle() {
        let h = loose_cycle(4, 3);
        let w = find_berge_cycle(&h, 4, false).expect("loose 4-cycle contains a Berge 4-cycle");
        assert!(w.validate(&h));
        match w {
            Witness::BergeCycle { core, edges } => {
                assert_eq!(core.len(), 4);
                assert_eq!(edges.len(), 4);
            }
            _ => panic!("unexpected witness"),
        }
    }

    #[test]
    fn sunflower_witnesses_are_filtered() {
        let h = sunflower_host(4, 2, 3);
        assert!(find_berge_cycle(&h, 4, false).is_none()); // kernel of size 2 < 4
        let w2 = find_berge_cycle(&h, 2, false);
        assert!(w2.is_some()); // two edges share the kernel pair
        assert!(find_berge_cycle(&h, 2, true).is_none()); // but every pair is a sunflower

        // kernel of size 4 admits a Berge 4-cycle, and it is a sunflower
        let big = sunflower_host(4, 4, 5);
        assert!(find_berge_cycle(&big, 4, false).is_some());
        assert!(find_berge_cycle(&big, 4, true).is_none());
    }

    #[test]
    fn steiner_system_is_linear() {
        assert!(find_berge_cycle(&fano(), 2, false).is_none());
        assert_eq!(girth_up_to(&fano(), 5), Some(3));
    }

    #[test]
    fn girth_examples() {
        let matching =
            Hypergraph::new(3, 6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert_eq!(girth_up_to(&matching, 6), None);

        let double = Hypergraph::new(3, 4, vec![vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
        assert_eq!(girth_up_to(&double, 6), Some(2));

        let c5 = loose_cycle(5, 3);
        assert_eq!(girth_up_to(&c5, 5), Some(5));
    }

    #[test]
    fn anchored_search_finds_witness_through_edge() {
        let h = crate::hosts::complete(5, 3);
        let fam = ForbiddenFamily::parse("berge:3", 3).unwrap();
        for e in 0..h.edge_count() {
            let w = fam.find_in_masked(&h, None, Some(e)).expect("every edge is on a Berge triangle");
            assert!(w.edge_ids().contains(&e));
            assert!(w.certifies(&h, &fam));
        }
    }
}
