//! Uniform hypergraphs with dense integer vertex ids.
//!
//! Every edge is a strictly increasing list of `r` vertex ids below `n`,
//! stored deduplicated and in lexicographic order, so edge ids are stable
//! for a given edge set. The structure is immutable after construction and
//! all queries are read-only.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An `r`-uniform hypergraph on vertices `0..n`.
///
/// Uniformity 1 is allowed (it arises when projecting onto a single
/// partition class); generators and the text format insist on `r >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHypergraph", into = "RawHypergraph")]
pub struct Hypergraph {
    r: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
    #[serde(skip)]
    adjacency: Vec<Vec<usize>>,
    #[serde(skip)]
    edge_ids: HashMap<Vec<usize>, usize>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawHypergraph {
    r: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl TryFrom<RawHypergraph> for Hypergraph {
    type Error = Error;
    fn try_from(raw: RawHypergraph) -> Result<Self> {
        Hypergraph::new(raw.r, raw.n, raw.edges)
    }
}

impl From<Hypergraph> for RawHypergraph {
    fn from(h: Hypergraph) -> Self {
        RawHypergraph { r: h.r, n: h.n, edges: h.edges }
    }
}

impl Hypergraph {
    /// Builds a hypergraph, rejecting malformed or duplicate edges.
    ///
    /// Edges may be given in any vertex order; they are sorted internally
    /// and the edge list is normalized to lexicographic order, which fixes
    /// edge ids.
    pub fn new(r: usize, n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if r == 0 {
            return Err(Error::invalid("uniformity must be at least 1"));
        }
        let mut normalized: Vec<Vec<usize>> = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.sort_unstable();
            if e.len() != r {
                return Err(Error::invalid(format!(
                    "edge {:?} has {} vertices, expected {}",
                    e,
                    e.len(),
                    r
                )));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("edge {:?} repeats a vertex", e)));
            }
            if let Some(&v) = e.last() {
                if v >= n {
                    return Err(Error::invalid(format!("edge {:?} exceeds vertex count {}", e, n)));
                }
            }
            normalized.push(e);
        }
        normalized.sort_unstable();
        if normalized.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate edge"));
        }
        Ok(Self::from_normalized(r, n, normalized))
    }

    /// As [`Hypergraph::new`] but silently collapses duplicate edges
    /// (set semantics, used by projections).
    pub fn from_edge_sets(r: usize, n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut normalized: Vec<Vec<usize>> = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.sort_unstable();
            if e.len() != r || e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("edge {:?} is not an {}-set", e, r)));
            }
            if e.last().is_some_and(|&v| v >= n) {
                return Err(Error::invalid(format!("edge {:?} exceeds vertex count {}", e, n)));
            }
            normalized.push(e);
        }
        normalized.sort_unstable();
        normalized.dedup();
        Ok(Self::from_normalized(r, n, normalized))
    }

    fn from_normalized(r: usize, n: usize, edges: Vec<Vec<usize>>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        let mut edge_ids = HashMap::with_capacity(edges.len());
        for (id, e) in edges.iter().enumerate() {
            for &v in e {
                adjacency[v].push(id);
            }
            edge_ids.insert(e.clone(), id);
        }
        Hypergraph { r, n, edges, adjacency, edge_ids }
    }

    pub fn empty(r: usize, n: usize) -> Self {
        Self::from_normalized(r, n, Vec::new())
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &[usize] {
        &self.edges[id]
    }

    /// Edge ids incident to `v`.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Id of the edge with this exact vertex set, if present.
    pub fn edge_id(&self, vertices: &[usize]) -> Option<usize> {
        let mut key = vertices.to_vec();
        key.sort_unstable();
        self.edge_ids.get(&key).copied()
    }

    /// Number of edges containing every vertex of `s` (the `|s|`-degree).
    pub fn k_degree(&self, s: &[usize]) -> Result<usize> {
        if s.is_empty() || s.len() >= self.r {
            return Err(Error::invalid(format!(
                "k-degree requires 1 <= |S| < r, got |S|={} with r={}",
                s.len(),
                self.r
            )));
        }
        let mut sorted = s.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("k-degree set repeats a vertex"));
        }
        if sorted.last().is_some_and(|&v| v >= self.n) {
            return Err(Error::invalid("k-degree set has an out-of-range vertex"));
        }
        Ok(self.count_superedges(&sorted))
    }

    /// Like [`Hypergraph::k_degree`] but without validation; `sorted` must be
    /// a strictly increasing in-range vertex list shorter than an edge.
    pub(crate) fn count_superedges(&self, sorted: &[usize]) -> usize {
        let anchor = match sorted.iter().min_by_key(|&&v| self.adjacency[v].len()) {
            Some(&v) => v,
            None => return 0,
        };
        self.adjacency[anchor]
            .iter()
            .filter(|&&id| contains_sorted(&self.edges[id], sorted))
            .count()
    }

    /// Exact maximum degree and k-degrees over all realized k-sets.
    pub fn degree_profile(&self) -> DegreeProfile {
        let max_degree = (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0);
        let mut max_k_degree = vec![0usize; self.r.saturating_sub(1)];
        if !max_k_degree.is_empty() {
            max_k_degree[0] = max_degree;
        }
        if self.r >= 3 && !self.edges.is_empty() {
            let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
            for e in &self.edges {
                for k in 2..self.r {
                    for subset in combinations(e, k) {
                        *counts.entry(subset).or_insert(0) += 1;
                    }
                }
            }
            for (subset, c) in counts {
                let k = subset.len();
                if c > max_k_degree[k - 1] {
                    max_k_degree[k - 1] = c;
                }
            }
        }
        DegreeProfile { max_degree, max_k_degree }
    }

    /// Sorted intersection of two edges.
    pub fn edge_intersection(&self, a: usize, b: usize) -> Vec<usize> {
        intersect_sorted(&self.edges[a], &self.edges[b])
    }

    /// Restriction to a subset of edge ids, on the same vertex set.
    pub fn subgraph(&self, edge_ids: &[usize]) -> Hypergraph {
        let mut edges: Vec<Vec<usize>> = edge_ids.iter().map(|&id| self.edges[id].clone()).collect();
        edges.sort_unstable();
        edges.dedup();
        Self::from_normalized(self.r, self.n, edges)
    }

    /// Ids of edges sharing at least one vertex with edge `id` (excluding itself).
    pub fn neighbors_of_edge(&self, id: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.edges[id]
            .iter()
            .flat_map(|&v| self.adjacency[v].iter().copied())
            .filter(|&f| f != id)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Checks the internal indexes against a recount; used by tests.
    pub fn check_consistency(&self) -> bool {
        let rebuilt = Self::from_normalized(self.r, self.n, self.edges.clone());
        rebuilt.adjacency == self.adjacency && rebuilt.edge_ids == self.edge_ids
    }
}

/// Maximum degree together with the maximum k-degree for every `1 <= k < r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub max_degree: usize,
    /// Entry `k-1` holds the maximum k-degree.
    pub max_k_degree: Vec<usize>,
}

impl DegreeProfile {
    /// Maximum k-degree, 0 when no edge realizes a k-set.
    pub fn max_for(&self, k: usize) -> usize {
        if k == 0 {
            return 0;
        }
        self.max_k_degree.get(k - 1).copied().unwrap_or(0)
    }
}

/// An ordered partition of the vertex set into `r` classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    part_of: Vec<usize>,
    parts: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from a class assignment; classes are 0-based.
    pub fn new(part_of: Vec<usize>, classes: usize) -> Result<Self> {
        if classes == 0 {
            return Err(Error::invalid("partition needs at least one class"));
        }
        if part_of.iter().any(|&p| p >= classes) {
            return Err(Error::invalid("partition class out of range"));
        }
        let mut parts = vec![Vec::new(); classes];
        for (v, &p) in part_of.iter().enumerate() {
            parts[p].push(v);
        }
        Ok(Partition { part_of, parts })
    }

    pub fn class_count(&self) -> usize {
        self.parts.len()
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.part_of
    }

    pub fn part(&self, i: usize) -> &[usize] {
        &self.parts[i]
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    /// True when the edge meets every class exactly once.
    pub fn is_transversal(&self, edge: &[usize]) -> bool {
        if edge.len() != self.parts.len() {
            return false;
        }
        let mut seen = vec![false; self.parts.len()];
        for &v in edge {
            let p = self.part_of[v];
            if seen[p] {
                return false;
            }
            seen[p] = true;
        }
        true
    }

    /// True when this is a valid r-partition of `h`: the assignment covers
    /// every vertex and every edge is transversal.
    pub fn is_valid_for(&self, h: &Hypergraph) -> bool {
        self.part_of.len() == h.vertex_count()
            && self.parts.len() == h.uniformity()
            && h.edges().iter().all(|e| self.is_transversal(e))
    }

    /// Reorders classes so that `order[i]` becomes class `i`.
    pub fn reorder(&self, order: &[usize]) -> Result<Partition> {
        if order.len() != self.parts.len() {
            return Err(Error::invalid("class order has wrong length"));
        }
        let mut seen = vec![false; order.len()];
        for &o in order {
            if o >= order.len() || seen[o] {
                return Err(Error::invalid("class order is not a permutation"));
            }
            seen[o] = true;
        }
        let mut new_index = vec![0usize; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let part_of = self.part_of.iter().map(|&p| new_index[p]).collect();
        Partition::new(part_of, order.len())
    }
}

/// Edge ids forming pairwise-disjoint edges.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub edge_ids: Vec<usize>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_ids.is_empty()
    }

    /// Verifies pairwise disjointness against the host.
    pub fn is_valid_for(&self, h: &Hypergraph) -> bool {
        let mut seen = vec![false; h.vertex_count()];
        for &id in &self.edge_ids {
            for &v in h.edge(id) {
                if seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
        true
    }
}

/// True when sorted `needle` is a subset of sorted `haystack`.
pub fn contains_sorted(haystack: &[usize], needle: &[usize]) -> bool {
    let mut it = haystack.iter();
    'outer: for &x in needle {
        for &y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

/// Sorted intersection of two sorted lists.
pub fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// All k-subsets of a sorted slice, in lexicographic order.
pub fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > items.len() {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + items.len() - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Visits the r-subsets of `0..n` in colex order (sorted subsets compared by
/// their largest differing element). This is the draw order pinned for
/// seeded random hosts.
pub fn for_each_subset_colex(n: usize, r: usize, mut f: impl FnMut(&[usize])) {
    if r == 0 || r > n {
        return;
    }
    fn rec(max_excl: usize, r: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if r == 0 {
            let mut sorted = buf.clone();
            sorted.sort_unstable();
            f(&sorted);
            return;
        }
        // fix the largest remaining element, then recurse below it
        for top in (r - 1)..max_excl {
            buf.push(top);
            rec(top, r - 1, buf, f);
            buf.pop();
        }
    }
    rec(n, r, &mut Vec::new(), &mut f);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hosts::complete;

    #[test]
    fn rejects_malformed_edges() {
        assert!(Hypergraph::new(3, 4, vec![vec![0, 1]]).is_err());
        assert!(Hypergraph::new(3, 4, vec![vec![0, 1, 4]]).is_err());
        assert!(Hypergraph::new(3, 4, vec![vec![0, 1, 1]]).is_err());
        assert!(Hypergraph::new(3, 4, vec![vec![0, 1, 2], vec![2, 1, 0]]).is_err());
    }

    #[test]
    fn k_degree_examples() {
        let empty = Hypergraph::empty(3, 5);
        assert_eq!(empty.k_degree(&[0, 1]).unwrap(), 0);

        // all 3-subsets of 4 vertices: exactly two contain {0,1}
        let k43 = complete(4, 3);
        assert_eq!(k43.k_degree(&[0, 1]).unwrap(), 2);

        // sunflower with 5 edges and kernel {0,1}
        let sf = crate::hosts::sunflower(5, 2, 3);
        assert_eq!(sf.k_degree(&[0, 1]).unwrap(), 5);

        assert!(k43.k_degree(&[]).is_err());
        assert!(k43.k_degree(&[0, 1, 2]).is_err());
        assert!(k43.k_degree(&[0, 9]).is_err());
    }

    #[test]
    fn degree_profile_examples() {
        let single = Hypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        let p = single.degree_profile();
        assert_eq!(p.max_degree, 1);
        assert_eq!(p.max_for(2), 1);

        let k53 = complete(5, 3);
        let p = k53.degree_profile();
        assert_eq!(p.max_degree, 6);
        assert_eq!(p.max_for(2), 3);

        let c43 = crate::hosts::loose_cycle(4, 3);
        let p = c43.degree_profile();
        assert_eq!(p.max_degree, 2);
        assert_eq!(p.max_for(2), 1);
    }

    #[test]
    fn degree_profile_matches_naive_recount() {
        let h = crate::hosts::generate(&crate::hosts::HostSpec::Random {
            n: 11,
            r: 3,
            p: 0.2,
            seed: 5,
        })
        .unwrap();
        let p = h.degree_profile();
        // naive recount over all k-sets
        for k in 1..3 {
            let mut best = 0;
            for s in combinations(&(0..11).collect::<Vec<_>>(), k) {
                best = best.max(h.k_degree(&s).unwrap());
            }
            assert_eq!(p.max_for(k), best);
        }
        assert!(p.max_k_degree.windows(2).all(|w| w[0] >= w[1]));
        assert!(h.check_consistency());
    }

    #[test]
    fn colex_order_prefix() {
        let mut seen = Vec::new();
        for_each_subset_colex(5, 3, |s| seen.push(s.to_vec()));
        assert_eq!(seen.len(), 10);
        assert_eq!(seen[0], vec![0, 1, 2]);
        assert_eq!(seen[1], vec![0, 1, 3]);
        assert_eq!(seen[2], vec![0, 2, 3]);
        assert_eq!(seen[3], vec![1, 2, 3]);
        assert_eq!(seen[4], vec![0, 1, 4]);
        assert_eq!(*seen.last().unwrap(), vec![2, 3, 4]);
    }

    #[test]
    fn partition_reorder() {
        let p = Partition::new(vec![0, 1, 2, 0], 3).unwrap();
        let q = p.reorder(&[2, 0, 1]).unwrap();
        assert_eq!(q.part_of(2), 0);
        assert_eq!(q.part_of(0), 1);
        assert_eq!(q.part_of(1), 2);
    }

    #[test]
    fn serde_roundtrip_rebuilds_indexes() {
        let h = complete(5, 3);
        let s = serde_json::to_string(&h).unwrap();
        let back: Hypergraph = serde_json::from_str(&s).unwrap();
        assert_eq!(h, back);
        assert!(back.check_consistency());
    }
}
