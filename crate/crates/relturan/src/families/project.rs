//! Matching-prefix projections of a small pattern.
//!
//! For a pattern `F` and `2 <= k < r`, enumerate every ordered r-partition
//! of the support under which each edge is transversal and the first `k`
//! classes induce a matching; project each edge onto the classes
//! `k-1..r-1` (0-based, keeping the shared class `k-1`), collapse
//! duplicates, and collect the resulting `(r-k+1)`-graphs up to
//! isomorphism.

use std::collections::BTreeMap;

use super::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub const DEFAULT_VERTEX_BUDGET: usize = 12;

pub fn project_family(f: &Hypergraph, k: usize) -> Result<Vec<Hypergraph>> {
    project_family_budgeted(f, k, DEFAULT_VERTEX_BUDGET)
}

pub fn project_family_budgeted(
    f: &Hypergraph,
    k: usize,
    vertex_budget: usize,
) -> Result<Vec<Hypergraph>> {
    let r = f.uniformity();
    if k < 2 || k >= r {
        return Err(Error::invalid("projection needs 2 <= k < r"));
    }
    let support: Vec<usize> = (0..f.vertex_count()).filter(|&v| f.degree(v) > 0).collect();
    if support.len() > vertex_budget {
        return Err(Error::resource(format!(
            "projection enumerates partitions of {} vertices, budget {}",
            support.len(),
            vertex_budget
        )));
    }
    if f.edge_count() == 0 {
        return Ok(Vec::new());
    }
    let mut out: BTreeMap<CanonicalForm, Hypergraph> = BTreeMap::new();
    let mut assignment = vec![usize::MAX; f.vertex_count()];
    enumerate(f, &support, 0, r, &mut assignment, &mut |assign| {
        if let Some(proj) = qualifying_projection(f, assign, k) {
            out.entry(canonical_form(&proj)).or_insert(proj);
        }
    });
    Ok(out.into_values().collect())
}

/// DFS over class assignments with incremental transversality pruning.
fn enumerate(
    f: &Hypergraph,
    support: &[usize],
    i: usize,
    r: usize,
    assignment: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if i == support.len() {
        visit(assignment);
        return;
    }
    let v = support[i];
    'classes: for class in 0..r {
        // no edge may see the same class twice
        for &e in f.incident(v) {
            for &u in f.edge(e) {
                if u != v && assignment[u] == class {
                    continue 'classes;
                }
            }
        }
        assignment[v] = class;
        enumerate(f, support, i + 1, r, assignment, visit);
        assignment[v] = usize::MAX;
    }
}

/// Projection onto the suffix classes when the prefix classes induce a
/// matching, `None` otherwise.
fn qualifying_projection(f: &Hypergraph, assignment: &[usize], k: usize) -> Option<Hypergraph> {
    let r = f.uniformity();
    let mut prefix_sets: Vec<Vec<usize>> = Vec::with_capacity(f.edge_count());
    for e in f.edges() {
        let mut p: Vec<usize> = e.iter().copied().filter(|&v| assignment[v] < k).collect();
        p.sort_unstable();
        prefix_sets.push(p);
    }
    prefix_sets.sort();
    prefix_sets.dedup();
    // distinct projected prefix edges must be pairwise disjoint
    let mut seen: Vec<usize> = Vec::new();
    for p in &prefix_sets {
        for &v in p {
            if seen.contains(&v) {
                return None;
            }
            seen.push(v);
        }
    }
    let suffix: Vec<Vec<usize>> = f
        .edges()
        .iter()
        .map(|e| e.iter().copied().filter(|&v| assignment[v] >= k - 1).collect())
        .collect();
    Hypergraph::from_edge_sets(r - k + 1, f.vertex_count(), suffix).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::canon::are_isomorphic;
    use crate::hosts::loose_cycle;

    fn cycle_graph(n: usize) -> Hypergraph {
        let edges = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        Hypergraph::new(2, n, edges).unwrap()
    }

    #[test]
    fn loose_cycles_have_empty_projections() {
        for ell in [3usize, 4, 5] {
            let f = loose_cycle(ell, 3);
            let ps = project_family(&f, 2).unwrap();
            assert!(ps.is_empty(), "loose {}-cycle projected to {:?}", ell, ps.len());
        }
    }

    #[test]
    fn four_edge_pattern_projects_to_the_four_cycle() {
        let f = crate::families::f5::pattern();
        let ps = project_family(&f, 2).unwrap();
        assert_eq!(ps.len(), 1);
        assert!(are_isomorphic(&ps[0], &cycle_graph(4)));
    }

    #[test]
    fn single_edge_projects_to_single_edge() {
        let f = Hypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        let ps = project_family(&f, 2).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].uniformity(), 2);
        assert_eq!(ps[0].edge_count(), 1);
    }

    #[test]
    fn non_partite_patterns_project_to_nothing() {
        // four pairwise-intersecting edges on four vertices cannot be
        // 3-partitioned transversally
        let f = crate::hosts::complete(4, 3);
        let ps = project_family(&f, 2).unwrap();
        assert!(ps.is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let f = loose_cycle(7, 3);
        assert!(project_family(&f, 2).is_err());
        assert!(project_family_budgeted(&f, 2, 14).is_ok());
    }
}
