//! Canonical labeling for small hypergraphs by iterative refinement with
//! full individualization backtracking.
//!
//! The canonical form relabels the support (vertices of positive degree)
//! and is the lexicographically smallest sorted edge list over all
//! refinement-compatible labelings. Correctness over speed: intended for
//! patterns of at most a dozen or so vertices.

use std::collections::BTreeMap;

use crate::hypergraph::Hypergraph;

/// Support size, uniformity, and relabeled edge list; equal forms mean the
/// supports are isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub uniformity: usize,
    pub support: usize,
    pub edges: Vec<Vec<usize>>,
}

pub fn canonical_form(h: &Hypergraph) -> CanonicalForm {
    let support: Vec<usize> = (0..h.vertex_count()).filter(|&v| h.degree(v) > 0).collect();
    let mut index = vec![usize::MAX; h.vertex_count()];
    for (i, &v) in support.iter().enumerate() {
        index[v] = i;
    }
    let edges: Vec<Vec<usize>> = h
        .edges()
        .iter()
        .map(|e| {
            let mut f: Vec<usize> = e.iter().map(|&v| index[v]).collect();
            f.sort_unstable();
            f
        })
        .collect();
    let n = support.len();
    if n == 0 {
        return CanonicalForm { uniformity: h.uniformity(), support: 0, edges: Vec::new() };
    }
    let incident: Vec<Vec<usize>> = {
        let mut inc = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            for &v in e {
                inc[v].push(id);
            }
        }
        inc
    };
    let mut best: Option<Vec<Vec<usize>>> = None;
    let colors = refine(&edges, &incident, vec![0; n]);
    search(&edges, &incident, colors, &mut best);
    CanonicalForm {
        uniformity: h.uniformity(),
        support: n,
        edges: best.unwrap_or_default(),
    }
}

pub fn are_isomorphic(a: &Hypergraph, b: &Hypergraph) -> bool {
    a.uniformity() == b.uniformity() && canonical_form(a) == canonical_form(b)
}

/// Stable 64-bit digest of the canonical form (FNV-1a).
pub fn canonical_hash(h: &Hypergraph) -> u64 {
    let form = canonical_form(h);
    let mut acc: u64 = 0xcbf29ce484222325;
    let mut eat = |x: u64| {
        for byte in x.to_le_bytes() {
            acc ^= byte as u64;
            acc = acc.wrapping_mul(0x100000001b3);
        }
    };
    eat(form.uniformity as u64);
    eat(form.support as u64);
    for e in &form.edges {
        eat(u64::MAX);
        for &v in e {
            eat(v as u64);
        }
    }
    acc
}

/// One-dimensional refinement: a vertex signature combines its color with
/// the multiset of its incident edges' color profiles.
fn refine(edges: &[Vec<usize>], incident: &[Vec<usize>], mut colors: Vec<usize>) -> Vec<usize> {
    loop {
        let mut signatures: Vec<(usize, Vec<Vec<usize>>, usize)> = (0..colors.len())
            .map(|v| {
                let mut profiles: Vec<Vec<usize>> = incident[v]
                    .iter()
                    .map(|&e| {
                        let mut p: Vec<usize> = edges[e].iter().map(|&u| colors[u]).collect();
                        p.sort_unstable();
                        p
                    })
                    .collect();
                profiles.sort();
                (colors[v], profiles, v)
            })
            .collect();
        signatures.sort();
        let mut next = vec![0usize; colors.len()];
        let mut rank = 0usize;
        for i in 0..signatures.len() {
            if i > 0
                && (signatures[i].0, &signatures[i].1) != (signatures[i - 1].0, &signatures[i - 1].1)
            {
                rank += 1;
            }
            next[signatures[i].2] = rank;
        }
        if next == colors {
            return colors;
        }
        colors = next;
    }
}

fn search(
    edges: &[Vec<usize>],
    incident: &[Vec<usize>],
    colors: Vec<usize>,
    best: &mut Option<Vec<Vec<usize>>>,
) {
    // find the smallest non-singleton color class
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &c) in colors.iter().enumerate() {
        cells.entry(c).or_default().push(v);
    }
    let target = cells.values().find(|cell| cell.len() > 1).cloned();
    match target {
        None => {
            // discrete: colors are a permutation
            let mut relabeled: Vec<Vec<usize>> = edges
                .iter()
                .map(|e| {
                    let mut f: Vec<usize> = e.iter().map(|&v| colors[v]).collect();
                    f.sort_unstable();
                    f
                })
                .collect();
            relabeled.sort();
            if best.as_ref().map_or(true, |b| relabeled < *b) {
                *best = Some(relabeled);
            }
        }
        Some(cell) => {
            for &v in &cell {
                // individualize v ahead of its cell mates
                let mut split = colors.clone();
                for u in 0..split.len() {
                    if split[u] > colors[v] || (split[u] == colors[v] && u != v) {
                        split[u] += 1;
                    }
                }
                let refined = refine(edges, incident, split);
                search(edges, incident, refined, best);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;

    fn hg(n: usize, edges: Vec<Vec<usize>>) -> Hypergraph {
        Hypergraph::new(edges[0].len(), n, edges).unwrap()
    }

    #[test]
    fn relabelings_share_a_form() {
        let a = hg(6, vec![vec![0, 1, 2], vec![0, 1, 3], vec![3, 4, 5], vec![2, 4, 5]]);
        // apply the permutation (0 5)(1 4)(2 3)
        let perm = [5, 4, 3, 2, 1, 0];
        let edges: Vec<Vec<usize>> = a
            .edges()
            .iter()
            .map(|e| e.iter().map(|&v| perm[v]).collect())
            .collect();
        let b = hg(6, edges);
        assert!(are_isomorphic(&a, &b));
        assert_eq!(canonical_hash(&a), canonical_hash(&b));
    }

    #[test]
    fn distinguishes_close_four_edge_graphs() {
        // both are Berge 4-cycles on six vertices built from two edges
        // sharing a pair, but their intersection-size multisets differ
        let a = hg(6, vec![vec![0, 1, 2], vec![0, 1, 3], vec![3, 4, 5], vec![2, 4, 5]]);
        let b = hg(6, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 4, 2], vec![3, 4, 5]]);
        assert!(!are_isomorphic(&a, &b));
    }

    #[test]
    fn isolated_vertices_do_not_matter() {
        let a = hg(4, vec![vec![0, 1, 2]]);
        let b = hg(9, vec![vec![4, 6, 8]]);
        assert!(are_isomorphic(&a, &b));
    }

    #[test]
    fn symmetric_graphs_canonicalize() {
        let sf = crate::hosts::sunflower(5, 1, 3);
        let form = canonical_form(&sf);
        assert_eq!(form.edges.len(), 5);
        // a rotated petal labeling gives the same form
        let edges = vec![vec![0, 9, 10], vec![0, 1, 2], vec![0, 3, 4], vec![0, 5, 6], vec![0, 7, 8]];
        let rot = hg(11, edges);
        assert_eq!(canonical_form(&rot), form);
    }
}
