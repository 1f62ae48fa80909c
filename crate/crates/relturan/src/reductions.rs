//! Classical subgraph reductions: transversal r-partite subgraphs, induced
//! k-graph projections, greedy matchings, and greedy linear subgraphs.

use rand::Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{combinations, Hypergraph, Matching, Partition};
use crate::rng::{stream, Stage};

/// An r-partition of `h` together with its transversal subgraph, with at
/// least `r^{-r} * e(h)` edges.
///
/// Random assignments are tried for up to 64 derived seeds; if none meets
/// the bound, a conditional-expectation greedy assignment (which always
/// does) is used instead.
pub fn partite_reduce(h: &Hypergraph, seed: u64) -> (Partition, Hypergraph) {
    partite_reduce_hinted(h, seed, None)
}

/// As [`partite_reduce`], trying `hint` first; a hint under which every edge
/// is transversal is returned as-is.
pub fn partite_reduce_hinted(
    h: &Hypergraph,
    seed: u64,
    hint: Option<&Partition>,
) -> (Partition, Hypergraph) {
    let r = h.uniformity();
    let n = h.vertex_count();
    let bound = edge_bound(h);
    if let Some(p) = hint {
        if p.is_valid_for(h) {
            return (p.clone(), h.clone());
        }
    }
    if n == 0 || h.edge_count() == 0 {
        let p = Partition::new(vec![0; n], r).unwrap();
        let sub = transversal_subgraph(h, &p);
        return (p, sub);
    }

    let mut best: Option<(usize, Partition)> = None;
    for attempt in 0..64u64 {
        let mut rng = stream(seed, attempt, Stage::Partition);
        let assignment: Vec<usize> = (0..n).map(|_| rng.gen_range(0..r)).collect();
        let p = Partition::new(assignment, r).unwrap();
        let count = transversal_count(h, &p);
        if best.as_ref().map_or(true, |(c, _)| count > *c) {
            best = Some((count, p));
        }
        if count >= bound {
            break;
        }
    }
    let (count, partition) = best.unwrap();
    if count >= bound {
        let sub = transversal_subgraph(h, &partition);
        return (partition, sub);
    }
    let greedy = conditional_expectation_partition(h);
    let greedy_count = transversal_count(h, &greedy);
    debug_assert!(greedy_count >= bound);
    if greedy_count >= count {
        (greedy.clone(), transversal_subgraph(h, &greedy))
    } else {
        (partition.clone(), transversal_subgraph(h, &partition))
    }
}

fn edge_bound(h: &Hypergraph) -> usize {
    let r = h.uniformity() as f64;
    (h.edge_count() as f64 * r.powi(-(h.uniformity() as i32))).ceil() as usize
}

fn transversal_count(h: &Hypergraph, p: &Partition) -> usize {
    h.edges().iter().filter(|e| p.is_transversal(e)).count()
}

/// Subgraph of the edges transversal to `p`.
pub fn transversal_subgraph(h: &Hypergraph, p: &Partition) -> Hypergraph {
    let ids: Vec<usize> = (0..h.edge_count()).filter(|&i| p.is_transversal(h.edge(i))).collect();
    h.subgraph(&ids)
}

/// Assigns vertices one at a time, maximizing the expected number of
/// transversal edges with the remaining vertices uniform. The result meets
/// the `r! r^{-r} >= r^{-r}` fraction deterministically.
fn conditional_expectation_partition(h: &Hypergraph) -> Partition {
    let r = h.uniformity();
    let n = h.vertex_count();
    let mut part_of: Vec<Option<usize>> = vec![None; n];
    // q[m]: probability that m uniformly assigned vertices fill m specific classes
    let mut q = vec![0.0f64; r + 1];
    for (m, item) in q.iter_mut().enumerate() {
        *item = factorial(m) / (r as f64).powi(m as i32);
    }
    for v in 0..n {
        let mut best_class = 0;
        let mut best_score = f64::NEG_INFINITY;
        for class in 0..r {
            part_of[v] = Some(class);
            let mut score = 0.0;
            for &eid in h.incident(v) {
                score += edge_completion_probability(h.edge(eid), &part_of, &q);
            }
            if score > best_score {
                best_score = score;
                best_class = class;
            }
        }
        part_of[v] = Some(best_class);
    }
    let assignment = part_of.into_iter().map(|p| p.unwrap_or(0)).collect();
    Partition::new(assignment, r).unwrap()
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

fn edge_completion_probability(edge: &[usize], part_of: &[Option<usize>], q: &[f64]) -> f64 {
    let mut used = 0u64;
    let mut unassigned = 0usize;
    for &v in edge {
        match part_of[v] {
            Some(c) => {
                let bit = 1u64 << c;
                if used & bit != 0 {
                    return 0.0;
                }
                used |= bit;
            }
            None => unassigned += 1,
        }
    }
    q[unassigned]
}

/// The `|index_set|`-graph induced by the union of the selected classes:
/// each edge is projected onto those classes, with duplicates collapsed.
pub fn induced_k_graph(h: &Hypergraph, p: &Partition, index_set: &[usize]) -> Result<Hypergraph> {
    if !p.is_valid_for(h) {
        return Err(Error::invalid("partition is not a valid r-partition of the host"));
    }
    if index_set.is_empty() {
        return Err(Error::invalid("index set must be nonempty"));
    }
    let mut classes = index_set.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() != index_set.len() || classes.iter().any(|&i| i >= h.uniformity()) {
        return Err(Error::invalid("index set must be distinct classes below r"));
    }
    let keep = |v: &usize| classes.binary_search(&p.part_of(*v)).is_ok();
    let edges: Vec<Vec<usize>> = h
        .edges()
        .iter()
        .map(|e| e.iter().copied().filter(|v| keep(v)).collect())
        .collect();
    Hypergraph::from_edge_sets(classes.len(), h.vertex_count(), edges)
}

/// Greedy maximal matching in ascending edge-id order; the result has at
/// least `e(h) / (r * max_degree)` edges.
pub fn greedy_matching(h: &Hypergraph) -> Matching {
    let mut used = vec![false; h.vertex_count()];
    let mut edge_ids = Vec::new();
    for (id, e) in h.edges().iter().enumerate() {
        if e.iter().all(|&v| !used[v]) {
            for &v in e {
                used[v] = true;
            }
            edge_ids.push(id);
        }
    }
    Matching { edge_ids }
}

/// Greedy linear subgraph in ascending edge-id order: an edge is kept when
/// it shares at most one vertex with every kept edge. The result has at
/// least `e(h) / (r^2 * D)` edges, where `D` is the maximum 2-degree.
pub fn linear_subgraph(h: &Hypergraph) -> Hypergraph {
    if h.uniformity() < 2 {
        return h.clone();
    }
    let mut pair_used: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
    let mut kept = Vec::new();
    'edges: for (id, e) in h.edges().iter().enumerate() {
        for pair in combinations(e, 2) {
            if pair_used.contains(&(pair[0], pair[1])) {
                continue 'edges;
            }
        }
        for pair in combinations(e, 2) {
            pair_used.insert((pair[0], pair[1]));
        }
        kept.push(id);
    }
    h.subgraph(&kept)
}
