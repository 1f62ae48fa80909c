//! Local isomorphisms: vertex maps that are homomorphisms (edge images are
//! edges) and injective across intersecting edge pairs (their images stay
//! distinct). Deciding whether such a map exists from a small pattern into
//! a target settles membership of the target in the pattern's
//! local-isomorphism closure.

use crate::hypergraph::Hypergraph;

/// Searches for a local isomorphism from `f` into `target`; both must have
/// the same uniformity. Returns the vertex map on success.
pub fn local_isomorphism_exists(f: &Hypergraph, target: &Hypergraph) -> Option<Vec<usize>> {
    if f.uniformity() != target.uniformity() || target.vertex_count() == 0 {
        return None;
    }
    if f.edge_count() == 0 {
        return Some(vec![0; f.vertex_count()]);
    }
    let order = vertex_order(f);
    let mut map = vec![usize::MAX; f.vertex_count()];
    if assign(f, target, &order, 0, &mut map) {
        for v in map.iter_mut() {
            if *v == usize::MAX {
                *v = 0; // isolated pattern vertices map anywhere
            }
        }
        Some(map)
    } else {
        None
    }
}

/// Support vertices ordered so each is adjacent to an earlier one when
/// possible (greedy connectivity order).
fn vertex_order(f: &Hypergraph) -> Vec<usize> {
    let n = f.vertex_count();
    let mut order = Vec::new();
    let mut placed = vec![false; n];
    loop {
        let next = (0..n)
            .filter(|&v| !placed[v] && f.degree(v) > 0)
            .max_by_key(|&v| {
                f.incident(v)
                    .iter()
                    .map(|&e| f.edge(e).iter().filter(|&&u| placed[u]).count())
                    .sum::<usize>()
            });
        match next {
            Some(v) => {
                placed[v] = true;
                order.push(v);
            }
            None => return order,
        }
    }
}

fn assign(f: &Hypergraph, target: &Hypergraph, order: &[usize], i: usize, map: &mut [usize]) -> bool {
    if i == order.len() {
        return check_full(f, target, map);
    }
    let v = order[i];
    for image in 0..target.vertex_count() {
        map[v] = image;
        if consistent(f, target, map, v) && assign(f, target, order, i + 1, map) {
            return true;
        }
    }
    map[v] = usize::MAX;
    false
}

/// Checks all constraints touching the newly mapped vertex `v`.
fn consistent(f: &Hypergraph, target: &Hypergraph, map: &[usize], v: usize) -> bool {
    for &e in f.incident(v) {
        let mut image: Vec<usize> = Vec::with_capacity(f.uniformity());
        let mut complete = true;
        for &u in f.edge(e) {
            if map[u] == usize::MAX {
                complete = false;
            } else {
                image.push(map[u]);
            }
        }
        image.sort_unstable();
        // images of edge vertices must stay distinct
        if image.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        if complete {
            if target.edge_id(&image).is_none() {
                return false;
            }
        } else if image.len() < f.uniformity() && target.count_superedges(&image) == 0 {
            return false;
        }
    }
    true
}

/// Final check of the image-distinctness condition on intersecting pairs.
fn check_full(f: &Hypergraph, target: &Hypergraph, map: &[usize]) -> bool {
    let image_of = |e: usize| {
        let mut img: Vec<usize> = f.edge(e).iter().map(|&u| map[u]).collect();
        img.sort_unstable();
        img
    };
    for a in 0..f.edge_count() {
        if target.edge_id(&image_of(a)).is_none() {
            return false;
        }
        for b in a + 1..f.edge_count() {
            if !f.edge_intersection(a, b).is_empty() && image_of(a) == image_of(b) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hosts::loose_cycle;
    use crate::hypergraph::Hypergraph;

    fn cycle_graph(n: usize) -> Hypergraph {
        let edges = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        Hypergraph::new(2, n, edges).unwrap()
    }

    #[test]
    fn identity_map_exists() {
        let f = loose_cycle(4, 3);
        let map = local_isomorphism_exists(&f, &f).expect("identity works");
        assert_eq!(map.len(), f.vertex_count());
    }

    #[test]
    fn nonlinear_patterns_never_map_into_linear_targets() {
        let nonlinear =
            Hypergraph::new(3, 4, vec![vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
        let fano = crate::hosts::fano();
        assert!(local_isomorphism_exists(&nonlinear, &fano).is_none());
    }

    #[test]
    fn five_cycle_maps_into_chorded_five_cycle() {
        let c5 = cycle_graph(5);
        let mut edges: Vec<Vec<usize>> = c5.edges().to_vec();
        edges.push(vec![0, 2]);
        let chorded = Hypergraph::new(2, 5, edges).unwrap();
        assert!(local_isomorphism_exists(&c5, &chorded).is_some());
    }

    #[test]
    fn merging_requires_room() {
        // a triangle cannot locally map into a single edge
        let tri = cycle_graph(3);
        let single = Hypergraph::new(2, 2, vec![vec![0, 1]]).unwrap();
        assert!(local_isomorphism_exists(&tri, &single).is_none());
    }
}
