//! Injective embedding search for small fixed patterns.
//!
//! Maps pattern edges to distinct host edges while growing an injective
//! vertex map; pattern edges are visited in a connectivity-first order so
//! partial maps prune early. Intended for patterns with a handful of
//! edges, not as a general subgraph isomorphism engine.

use super::{View, Witness};
use crate::hypergraph::Hypergraph;

/// Finds an injective embedding of `pattern` into the live part of the
/// view; when `required` is set, some pattern edge must map onto it.
pub(crate) fn find_embedding(
    view: View<'_>,
    pattern: &Hypergraph,
    required: Option<usize>,
) -> Option<Witness> {
    let h = view.h;
    if h.uniformity() != pattern.uniformity()
        || pattern.edge_count() == 0
        || view.live_count() < pattern.edge_count()
    {
        return None;
    }
    let order = connectivity_order(pattern);
    let mut state = State {
        view,
        pattern,
        order: &order,
        vmap: vec![usize::MAX; pattern.vertex_count()],
        host_vertex_used: vec![false; h.vertex_count()],
        host_edge_used: vec![false; h.edge_count()],
        assignment: vec![usize::MAX; pattern.edge_count()],
        required,
        required_used: false,
    };
    if state.assign(0) {
        let edges = order.iter().map(|&pe| state.assignment[pe]).collect::<Vec<_>>();
        // report edges in pattern-edge order
        let mut by_pattern = vec![0usize; pattern.edge_count()];
        for (slot, &pe) in order.iter().enumerate() {
            by_pattern[pe] = edges[slot];
        }
        return Some(Witness::Embedding {
            pattern: pattern.clone(),
            vertex_map: state.vmap,
            edges: by_pattern,
        });
    }
    None
}

/// Pattern edges ordered so each (after the first) shares a vertex with an
/// earlier one whenever the pattern is connected.
fn connectivity_order(pattern: &Hypergraph) -> Vec<usize> {
    let m = pattern.edge_count();
    let mut order = Vec::with_capacity(m);
    let mut placed = vec![false; m];
    let mut touched: Vec<bool> = vec![false; pattern.vertex_count()];
    while order.len() < m {
        let next = (0..m)
            .filter(|&e| !placed[e])
            .max_by_key(|&e| pattern.edge(e).iter().filter(|&&v| touched[v]).count());
        let e = next.unwrap();
        placed[e] = true;
        for &v in pattern.edge(e) {
            touched[v] = true;
        }
        order.push(e);
    }
    order
}

struct State<'a> {
    view: View<'a>,
    pattern: &'a Hypergraph,
    order: &'a [usize],
    vmap: Vec<usize>,
    host_vertex_used: Vec<bool>,
    host_edge_used: Vec<bool>,
    assignment: Vec<usize>,
    required: Option<usize>,
    required_used: bool,
}

impl State<'_> {
    fn assign(&mut self, slot: usize) -> bool {
        if slot == self.order.len() {
            return self.required.is_none() || self.required_used;
        }
        let pe = self.order[slot];
        let pverts = self.pattern.edge(pe).to_vec();
        let anchored: Option<usize> =
            pverts.iter().find(|&&p| self.vmap[p] != usize::MAX).map(|&p| self.vmap[p]);
        let candidates: Vec<usize> = match anchored {
            Some(hv) => self.view.live_incident(hv).collect(),
            None => {
                // free edge: if a required edge is still owed and the rest of
                // the pattern is disconnected from what's placed, try it first
                self.view.live_edges().collect()
            }
        };
        for he in candidates {
            if self.host_edge_used[he] {
                continue;
            }
            if self.try_edge(slot, pe, he) {
                return true;
            }
        }
        false
    }

    fn try_edge(&mut self, slot: usize, pe: usize, he: usize) -> bool {
        let pverts = self.pattern.edge(pe).to_vec();
        let hverts = self.view.h.edge(he).to_vec();
        // backtracking over alignments of pattern vertices onto host vertices
        let mut stack_assigned: Vec<usize> = Vec::new();
        let ok = self.align(&pverts, &hverts, 0, &mut vec![false; hverts.len()], &mut stack_assigned, slot, pe, he);
        ok
    }

    #[allow(clippy::too_many_arguments)]
    fn align(
        &mut self,
        pverts: &[usize],
        hverts: &[usize],
        i: usize,
        taken: &mut Vec<bool>,
        newly: &mut Vec<usize>,
        slot: usize,
        pe: usize,
        he: usize,
    ) -> bool {
        if i == pverts.len() {
            self.host_edge_used[he] = true;
            self.assignment[pe] = he;
            let was_required = self.required == Some(he);
            if was_required {
                self.required_used = true;
            }
            let done = self.assign(slot + 1);
            if !done {
                if was_required {
                    self.required_used = false;
                }
                self.assignment[pe] = usize::MAX;
                self.host_edge_used[he] = false;
            }
            return done;
        }
        let p = pverts[i];
        if self.vmap[p] != usize::MAX {
            // already mapped: its image must be on this host edge
            match hverts.iter().position(|&hv| hv == self.vmap[p]) {
                Some(j) if !taken[j] => {
                    taken[j] = true;
                    let done = self.align(pverts, hverts, i + 1, taken, newly, slot, pe, he);
                    taken[j] = false;
                    done
                }
                _ => false,
            }
        } else {
            for j in 0..hverts.len() {
                if taken[j] || self.host_vertex_used[hverts[j]] {
                    continue;
                }
                taken[j] = true;
                self.vmap[p] = hverts[j];
                self.host_vertex_used[hverts[j]] = true;
                newly.push(p);
                if self.align(pverts, hverts, i + 1, taken, newly, slot, pe, he) {
                    return true;
                }
                newly.pop();
                self.host_vertex_used[hverts[j]] = false;
                self.vmap[p] = usize::MAX;
                taken[j] = false;
            }
            false
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hosts::{complete, sunflower};

    #[test]
    fn embeds_sunflower_pattern_in_sunflower_host() {
        let host = sunflower(6, 2, 3);
        let pattern = sunflower(4, 2, 3);
        let w = find_embedding(View::full(&host), &pattern, None).expect("4 of 6 petals embed");
        assert!(w.validate(&host));
    }

    #[test]
    fn respects_required_edge() {
        let host = complete(6, 3);
        let pattern = sunflower(2, 1, 3);
        for req in 0..host.edge_count() {
            let w = find_embedding(View::full(&host), &pattern, Some(req)).expect("embedding");
            assert!(w.edge_ids().contains(&req));
        }
    }

    #[test]
    fn no_embedding_when_pattern_too_large() {
        let host = sunflower(3, 2, 3);
        let pattern = sunflower(4, 2, 3);
        assert!(find_embedding(View::full(&host), &pattern, None).is_none());
    }

    #[test]
    fn disconnected_patterns_work() {
        let host = complete(7, 3);
        let pattern = crate::hypergraph::Hypergraph::new(
            3,
            6,
            vec![vec![0, 1, 2], vec![3, 4, 5]],
        )
        .unwrap();
        let w = find_embedding(View::full(&host), &pattern, None).expect("two disjoint edges");
        assert!(w.validate(&host));
    }
}
