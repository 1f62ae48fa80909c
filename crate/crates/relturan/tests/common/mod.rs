//! Shared fixtures for the integration suites: constructive enumeration of
//! small family members up to isomorphism, and small random hypergraphs.

#![allow(dead_code)]

use std::collections::BTreeSet;

use relturan::families::canon::{canonical_form, CanonicalForm};
use relturan::hypergraph::{combinations, Hypergraph};
use relturan::rng::{stream, Stage};

/// All Berge `ell`-cycle members (exactly `ell` edges admitting a core
/// set) with at most `max_vertices` vertices, up to isomorphism;
/// optionally restricted to non-sunflowers.
///
/// Construction: core vertices `0..ell`; edge `i` holds the consecutive
/// core pair plus `r-2` fillers drawn from other core vertices or from
/// fresh vertices allocated in first-use order. Every member relabels into
/// this normal form, so the enumeration is complete within the vertex
/// bound.
pub fn berge_members(
    r: usize,
    ell: usize,
    max_vertices: usize,
    non_sunflower: bool,
) -> Vec<Hypergraph> {
    assert!(r >= 2 && ell >= 2);
    let mut seen: BTreeSet<CanonicalForm> = BTreeSet::new();
    let mut out = Vec::new();
    let mut edges: Vec<Vec<usize>> = Vec::with_capacity(ell);
    build_berge(
        r,
        ell,
        max_vertices,
        non_sunflower,
        ell, // next fresh vertex id
        &mut edges,
        &mut seen,
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn build_berge(
    r: usize,
    ell: usize,
    max_vertices: usize,
    non_sunflower: bool,
    next_fresh: usize,
    edges: &mut Vec<Vec<usize>>,
    seen: &mut BTreeSet<CanonicalForm>,
    out: &mut Vec<Hypergraph>,
) {
    let i = edges.len();
    if i == ell {
        let n = edges.iter().flatten().copied().max().unwrap() + 1;
        let h = match Hypergraph::new(r, n, edges.clone()) {
            Ok(h) => h,
            Err(_) => return, // duplicate edges
        };
        if non_sunflower
            && relturan::families::sunflower::is_sunflower(&h).is_some()
        {
            return;
        }
        let form = canonical_form(&h);
        if seen.insert(form) {
            out.push(h);
        }
        return;
    }
    let (a, b) = (i, (i + 1) % ell);
    // candidate fillers: existing vertices plus up to r-2 fresh ones
    let mut candidates: Vec<usize> = (0..next_fresh).filter(|&v| v != a && v != b).collect();
    let fresh_allowed = max_vertices.saturating_sub(next_fresh).min(r - 2);
    for f in 0..fresh_allowed {
        candidates.push(next_fresh + f);
    }
    for fillers in combinations(&candidates, r - 2) {
        // fresh ids must be used contiguously from next_fresh
        let fresh_used: Vec<usize> =
            fillers.iter().copied().filter(|&v| v >= next_fresh).collect();
        if fresh_used
            .iter()
            .enumerate()
            .any(|(idx, &v)| v != next_fresh + idx)
        {
            continue;
        }
        let mut edge = vec![a, b];
        edge.extend(&fillers);
        edge.sort_unstable();
        if edges.contains(&edge) {
            continue;
        }
        edges.push(edge);
        build_berge(
            r,
            ell,
            max_vertices,
            non_sunflower,
            next_fresh + fresh_used.len(),
            edges,
            seen,
            out,
        );
        edges.pop();
    }
}

/// All sunflower-plus members with sunflower part of `2..=ell_max` edges,
/// at most `max_vertices` vertices, up to isomorphism.
///
/// Normal form: kernel `0..kappa`, pairwise-disjoint petals of size
/// `r-kappa`, and an extra edge described by its kernel-prefix size, a
/// weakly decreasing vector of per-petal vertex counts, and a fresh
/// remainder; kernel vertices, petals, and within-petal vertices are
/// interchangeable, so this covers every member.
pub fn sunflower_plus_members(r: usize, ell_max: usize, max_vertices: usize) -> Vec<Hypergraph> {
    let mut seen: BTreeSet<CanonicalForm> = BTreeSet::new();
    let mut out = Vec::new();
    for kappa in 1..r {
        let petal = r - kappa;
        for core_edges in 2..=ell_max {
            let base_n = kappa + core_edges * petal;
            if base_n > max_vertices {
                continue;
            }
            let mut edges: Vec<Vec<usize>> = Vec::new();
            for i in 0..core_edges {
                let mut e: Vec<usize> = (0..kappa).collect();
                e.extend(kappa + i * petal..kappa + (i + 1) * petal);
                edges.push(e);
            }
            // extra edge: s kernel vertices + petal counts + fresh
            for s in 1..=kappa {
                for counts in petal_count_vectors(core_edges, petal, r - s) {
                    let used: usize = counts.iter().sum();
                    let fresh = r - s - used;
                    if base_n + fresh > max_vertices {
                        continue;
                    }
                    let mut extra: Vec<usize> = (0..s).collect();
                    for (i, &c) in counts.iter().enumerate() {
                        let start = kappa + i * petal;
                        extra.extend(start..start + c);
                    }
                    extra.extend(base_n..base_n + fresh);
                    extra.sort_unstable();
                    if edges.contains(&extra) {
                        continue;
                    }
                    let mut all = edges.clone();
                    all.push(extra);
                    let n = base_n + fresh;
                    let h = Hypergraph::new(r, n, all).expect("well formed member");
                    // the union must not itself be a sunflower
                    if relturan::families::sunflower::is_sunflower(&h).is_some() {
                        continue;
                    }
                    let form = canonical_form(&h);
                    if seen.insert(form) {
                        out.push(h);
                    }
                }
            }
        }
    }
    out
}

/// Weakly decreasing vectors `(c_1 >= ... >= c_m)` with `0 <= c_i <=
/// petal` and sum at most `budget`.
fn petal_count_vectors(m: usize, petal: usize, budget: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; m];
    fn rec(
        i: usize,
        m: usize,
        petal: usize,
        budget: usize,
        prev: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == m {
            out.push(cur.clone());
            return;
        }
        for c in (0..=petal.min(budget).min(prev)).rev() {
            cur[i] = c;
            rec(i + 1, m, petal, budget - c, c, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, m, petal, budget, petal, &mut cur, &mut out);
    out
}

/// Random small hypergraphs for cross-validation suites.
pub fn random_small(r: usize, n: usize, edges: usize, seed: u64) -> Hypergraph {
    use rand::seq::SliceRandom;
    let mut pool: Vec<Vec<usize>> = Vec::new();
    relturan::hypergraph::for_each_subset_colex(n, r, |s| pool.push(s.to_vec()));
    let mut rng = stream(seed, 0, Stage::Generate);
    pool.shuffle(&mut rng);
    pool.truncate(edges.min(pool.len()));
    Hypergraph::new(r, n, pool).unwrap()
}

/// The graph cycle `C_n` as a 2-graph.
pub fn cycle_graph(n: usize) -> Hypergraph {
    let edges = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    Hypergraph::new(2, n, edges).unwrap()
}
