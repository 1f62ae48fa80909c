//! Codegree splits and dyadic degree classes on partite hosts.

use super::guarded_ln;
use crate::error::{Error, Result};
use crate::hypergraph::{combinations, Hypergraph, Partition};

/// Edge ids whose prefix k-set (one vertex from each of the first `k`
/// partition classes) has k-degree at least `d`, and the complement.
#[derive(Clone, Debug)]
pub struct CodegreeSplit {
    pub heavy: Vec<usize>,
    pub light: Vec<usize>,
}

/// The prefix k-set of a transversal edge under `p`.
fn prefix_set(edge: &[usize], p: &Partition, k: usize) -> Vec<usize> {
    let mut s: Vec<usize> = edge.iter().copied().filter(|&v| p.part_of(v) < k).collect();
    s.sort_unstable();
    s
}

/// Splits edges by the k-degree of their prefix k-set.
pub fn codegree_split(h: &Hypergraph, p: &Partition, k: usize, d: f64) -> Result<CodegreeSplit> {
    if !p.is_valid_for(h) {
        return Err(Error::invalid("codegree split needs a valid r-partition"));
    }
    if k == 0 || k >= h.uniformity() {
        return Err(Error::invalid("codegree split needs 1 <= k < r"));
    }
    let mut heavy = Vec::new();
    let mut light = Vec::new();
    for (id, e) in h.edges().iter().enumerate() {
        let s = prefix_set(e, p, k);
        debug_assert_eq!(s.len(), k);
        if h.count_superedges(&s) as f64 >= d {
            heavy.push(id);
        } else {
            light.push(id);
        }
    }
    Ok(CodegreeSplit { heavy, light })
}

/// Edge ids containing any k-subset of k-degree at least `d`; this is the
/// branch criterion (partition independent).
pub fn heavy_any(h: &Hypergraph, k: usize, d: f64) -> Vec<usize> {
    let mut out = Vec::new();
    for (id, e) in h.edges().iter().enumerate() {
        let hit = combinations(e, k)
            .into_iter()
            .any(|s| h.count_superedges(&s) as f64 >= d);
        if hit {
            out.push(id);
        }
    }
    out
}

/// Among all k-subsets of partition classes, the one whose projected
/// k-sets are heavy for the most edges (ties to the lexicographically
/// first), with that count.
pub fn best_index_set(h: &Hypergraph, p: &Partition, k: usize, d: f64) -> (Vec<usize>, usize) {
    let r = h.uniformity();
    let classes: Vec<usize> = (0..r).collect();
    let mut best: Option<(Vec<usize>, usize)> = None;
    for subset in combinations(&classes, k) {
        let count = h
            .edges()
            .iter()
            .filter(|e| {
                let mut s: Vec<usize> = e
                    .iter()
                    .copied()
                    .filter(|&v| subset.binary_search(&p.part_of(v)).is_ok())
                    .collect();
                s.sort_unstable();
                h.count_superedges(&s) as f64 >= d
            })
            .count();
        if best.as_ref().map_or(true, |(_, c)| count > *c) {
            best = Some((subset, count));
        }
    }
    best.expect("at least one class subset")
}

/// Largest dyadic prefix-degree class at base level `d`.
#[derive(Clone, Debug)]
pub struct DyadicClass {
    pub edge_ids: Vec<usize>,
    /// The class's lower degree bound `d' = 2^j d`; member prefix degrees
    /// lie in `[d', 2d')` within the returned subgraph.
    pub level_degree: f64,
}

/// Groups the prefix-heavy edges into dyadic degree classes `[2^j d,
/// 2^{j+1} d)` and returns the largest class. Because edges with the same
/// prefix share their degree, the class restricted to itself keeps prefix
/// degrees inside the window.
///
/// When at least `2^{-r-1} e(H)` edges are prefix-heavy, the returned
/// class has at least `e(H) / (2^r log2 max_degree)` edges. Errors when no
/// edge is prefix-heavy (take the light branch instead).
pub fn dyadic_select(h: &Hypergraph, p: &Partition, k: usize, d: f64) -> Result<DyadicClass> {
    if d <= 0.0 {
        return Err(Error::invalid("dyadic base level must be positive"));
    }
    let split = codegree_split(h, p, k, d)?;
    if split.heavy.is_empty() {
        return Err(Error::invalid(
            "no prefix-heavy edges at this level; use the light branch",
        ));
    }
    let mut classes: std::collections::BTreeMap<u32, Vec<usize>> = Default::default();
    for id in split.heavy {
        let s = prefix_set(h.edge(id), p, k);
        let deg = h.count_superedges(&s) as f64;
        let j = (deg / d).log2().floor().max(0.0) as u32;
        classes.entry(j).or_default().push(id);
    }
    let (level, edge_ids) = classes
        .into_iter()
        .max_by_key(|(j, ids)| (ids.len(), std::cmp::Reverse(*j)))
        .unwrap();
    Ok(DyadicClass { edge_ids, level_degree: d * 2f64.powi(level as i32) })
}

/// Pigeonhole floor the largest class is guaranteed to meet when the
/// edges with some heavy k-subset are a majority: the best index set
/// carries at least a `2^{-r-1}` fraction and at most `1 + log2(max
/// degree)` dyadic classes partition it.
pub fn dyadic_class_floor(edge_count: usize, r: usize, max_degree: usize) -> f64 {
    let log2 = (max_degree.max(2) as f64).log2().max(1.0);
    edge_count as f64 / (2f64.powi(r as i32 + 2) * log2)
}

/// `p = d ln(max_degree) / max_degree`, the sparsification rate used ahead
/// of the matching step (before clamping).
pub fn sparsification_rate(d: f64, max_degree: usize) -> f64 {
    if max_degree == 0 {
        return 1.0;
    }
    d * guarded_ln(max_degree as f64) / max_degree as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hosts::{partite_complete, sunflower};
    use crate::reductions::partite_reduce;

    fn natural_sunflower_partition(edges: usize) -> (Hypergraph, Partition) {
        let h = sunflower(edges, 2, 3);
        let mut assign = vec![0usize; h.vertex_count()];
        assign[1] = 1;
        for v in 2..h.vertex_count() {
            assign[v] = 2;
        }
        (h, Partition::new(assign, 3).unwrap())
    }

    #[test]
    fn split_examples() {
        let (h, p) = natural_sunflower_partition(5);
        // d = 1: every edge contains its own prefix set
        let s = codegree_split(&h, &p, 2, 1.0).unwrap();
        assert_eq!(s.heavy.len(), 5);
        // d above the max 2-degree: nothing is heavy
        let s = codegree_split(&h, &p, 2, 6.0).unwrap();
        assert!(s.heavy.is_empty());
        // kernel degree equals the edge count
        let s = codegree_split(&h, &p, 2, 5.0).unwrap();
        assert_eq!(s.heavy.len(), 5);
    }

    #[test]
    fn dyadic_selects_largest_class() {
        // two prefix-degree populations: sizes 10 (degree 5 each over two
        // prefixes) and 3 (degree 1 or 2): build via partite blocks
        let a = partite_complete(&[2, 1, 5]);
        // classes of sizes 10 = 2*5 with pair degree 5
        let p = Partition::new(
            (0..a.vertex_count())
                .map(|v| if v < 2 { 0 } else if v == 2 { 1 } else { 2 })
                .collect(),
            3,
        )
        .unwrap();
        let class = dyadic_select(&a, &p, 2, 1.0).unwrap();
        assert_eq!(class.edge_ids.len(), 10);
        assert!((class.level_degree - 4.0).abs() < 1e-9); // 5 lies in [4, 8)

        // regular prefix degrees land in the base class
        let (h, q) = natural_sunflower_partition(4);
        let class = dyadic_select(&h, &q, 2, 4.0).unwrap();
        assert_eq!(class.edge_ids.len(), 4);
        assert!((class.level_degree - 4.0).abs() < 1e-9);

        assert!(dyadic_select(&h, &q, 2, 10.0).is_err());
    }

    #[test]
    fn best_index_set_finds_the_heavy_classes() {
        // pairs across classes (1,2) have degree 4; others degree <= 2
        let h = partite_complete(&[2, 2, 4]);
        let p = Partition::new(
            (0..8).map(|v| if v < 2 { 0 } else if v < 4 { 1 } else { 2 }).collect(),
            3,
        )
        .unwrap();
        let (classes, count) = best_index_set(&h, &p, 2, 3.0);
        assert_eq!(classes, vec![0, 1]);
        assert_eq!(count, h.edge_count());
    }

    #[test]
    fn dyadic_floor_holds_on_random_partite_hosts() {
        for seed in 0..8 {
            let h = crate::hosts::random_host(15, 3, 0.3, seed);
            let (p, sub) = partite_reduce(&h, seed);
            if sub.edge_count() == 0 {
                continue;
            }
            let d = 1.5f64;
            let heavy = heavy_any(&sub, 2, d);
            if (heavy.len() * 2) <= sub.edge_count() {
                continue;
            }
            let (classes, _) = best_index_set(&sub, &p, 2, d);
            let order: Vec<usize> = classes
                .iter()
                .copied()
                .chain((0..3).filter(|c| !classes.contains(c)))
                .collect();
            let q = p.reorder(&order).unwrap();
            let class = dyadic_select(&sub, &q, 2, d).unwrap();
            let floor = dyadic_class_floor(
                sub.edge_count(),
                3,
                sub.degree_profile().max_degree,
            );
            assert!(
                class.edge_ids.len() as f64 >= floor,
                "seed {}: class {} below floor {}",
                seed,
                class.edge_ids.len(),
                floor
            );
        }
    }
}
