//! Exact maximum family-free subgraphs at desk scale.
//!
//! The search is a conflict-driven branch and bound over edge subsets:
//! when the current candidate graph contains a family member, at least one
//! of the member's undecided edges must be excluded, so the node branches
//! over those exclusions (forcing earlier ones in, which keeps the
//! branches disjoint). A greedy-plus-local-search incumbent seeds the
//! bound `|kept| + |undecided| <= best`. Hosts above the exact ceiling get
//! the randomized greedy answer, flagged `proved_exact = false`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::ForbiddenFamily;
use crate::hosts::complete;
use crate::hypergraph::Hypergraph;
use crate::rng::{stream, Stage};

pub const DEFAULT_EXACT_EDGE_CEILING: usize = 30;
pub const DEFAULT_CLASSICAL_EXACT_EDGES: usize = 90;
pub const DEFAULT_NODE_BUDGET: u64 = 40_000_000;
pub const DEFAULT_INEXACT_EDGE_CEILING: usize = 600;
const LOCAL_SEARCH_RESTARTS: u64 = 32;

/// Outcome of one extremal query.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub optimum: usize,
    pub witness_subgraph: Hypergraph,
    pub proved_exact: bool,
    pub nodes_explored: u64,
}

/// Oracle context: tunables plus a persistent result cache.
///
/// The cache is an append-only JSON-lines file keyed by the canonical
/// family string and a host digest; set the path explicitly or through
/// `RELTURAN_CACHE` when constructing via [`Oracle::from_env`].
pub struct Oracle {
    pub exact_edge_ceiling: usize,
    pub classical_exact_edges: usize,
    pub inexact_edge_ceiling: usize,
    pub node_budget: u64,
    cache: BTreeMap<String, OracleResult>,
    cache_path: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct CacheLine {
    key: String,
    result: OracleResult,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            exact_edge_ceiling: DEFAULT_EXACT_EDGE_CEILING,
            classical_exact_edges: DEFAULT_CLASSICAL_EXACT_EDGES,
            inexact_edge_ceiling: DEFAULT_INEXACT_EDGE_CEILING,
            node_budget: DEFAULT_NODE_BUDGET,
            cache: BTreeMap::new(),
            cache_path: None,
        }
    }
}

impl Oracle {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reads `RELTURAN_CACHE` for the cache file location.
    pub fn from_env() -> Self {
        let mut oracle = Self::default();
        if let Ok(path) = std::env::var("RELTURAN_CACHE") {
            if !path.is_empty() {
                let _ = oracle.attach_cache(PathBuf::from(path));
            }
        }
        oracle
    }

    /// Loads any existing entries and appends new results to `path`.
    pub fn attach_cache(&mut self, path: PathBuf) -> Result<()> {
        if path.exists() {
            let text = std::fs::read_to_string(&path)?;
            for line in text.lines() {
                if line.is_empty() {
                    continue;
                }
                let entry: CacheLine = serde_json::from_str(line)
                    .map_err(|e| Error::parse(format!("bad cache line: {}", e)))?;
                self.cache.insert(entry.key, entry.result);
            }
        }
        self.cache_path = Some(path);
        Ok(())
    }

    fn remember(&mut self, key: String, result: &OracleResult) {
        if let Some(path) = &self.cache_path {
            if self.cache.get(&key) != Some(result) {
                let line = CacheLine { key: key.clone(), result: result.clone() };
                if let Ok(mut f) =
                    std::fs::OpenOptions::new().create(true).append(true).open(path)
                {
                    let _ = writeln!(f, "{}", serde_json::to_string(&line).unwrap());
                }
            }
        }
        self.cache.insert(key, result.clone());
    }

    /// Maximum number of edges of a family-free subgraph of `host`.
    ///
    /// Exact (and proved so) when the host is within the exact ceiling and
    /// the node budget suffices; otherwise the best subgraph found is
    /// returned with `proved_exact = false`.
    pub fn ex_relative(&mut self, host: &Hypergraph, family: &ForbiddenFamily) -> Result<OracleResult> {
        if host.uniformity() != family.uniformity() {
            return Err(Error::invalid("host and family uniformity differ"));
        }
        let key = format!("{}|host={:016x}", family.canonical_string(), host_digest(host));
        if let Some(hit) = self.cache.get(&key) {
            return Ok(hit.clone());
        }
        if host.edge_count() > self.inexact_edge_ceiling {
            return Err(Error::resource(format!(
                "host has {} edges, above the oracle ceiling {}",
                host.edge_count(),
                self.inexact_edge_ceiling
            )));
        }
        let incumbent = greedy_incumbent(host, family, LOCAL_SEARCH_RESTARTS);
        let result = if host.edge_count() <= self.exact_edge_ceiling {
            branch_and_bound(host, family, incumbent, self.node_budget)
        } else {
            let nodes = 0;
            OracleResult {
                optimum: incumbent.len(),
                witness_subgraph: host.subgraph(&incumbent),
                proved_exact: false,
                nodes_explored: nodes,
            }
        };
        debug_assert!(family.is_free(&result.witness_subgraph));
        self.remember(key, &result);
        Ok(result)
    }

    /// Classical variant: the host is the complete r-graph on `t` vertices.
    /// Results are cached by `(t, r, family)`; hosts above the classical
    /// exact ceiling are served by greedy + local search, flagged inexact.
    pub fn ex_classical(&mut self, t: usize, r: usize, family: &ForbiddenFamily) -> Result<OracleResult> {
        if r < 1 {
            return Err(Error::invalid("uniformity must be positive"));
        }
        let key = format!("{}|complete={},{}", family.canonical_string(), t, r);
        if let Some(hit) = self.cache.get(&key) {
            return Ok(hit.clone());
        }
        if t < r {
            let result = OracleResult {
                optimum: 0,
                witness_subgraph: Hypergraph::empty(r, t),
                proved_exact: true,
                nodes_explored: 0,
            };
            self.remember(key, &result);
            return Ok(result);
        }
        let host = complete(t, r);
        if host.edge_count() > self.inexact_edge_ceiling {
            return Err(Error::resource(format!(
                "complete host with {} edges is above the oracle ceiling",
                host.edge_count()
            )));
        }
        let incumbent = greedy_incumbent(&host, family, LOCAL_SEARCH_RESTARTS);
        let result = if host.edge_count() <= self.classical_exact_edges {
            branch_and_bound(&host, family, incumbent, self.node_budget)
        } else {
            OracleResult {
                optimum: incumbent.len(),
                witness_subgraph: host.subgraph(&incumbent),
                proved_exact: false,
                nodes_explored: 0,
            }
        };
        debug_assert!(family.is_free(&result.witness_subgraph));
        self.remember(key, &result);
        Ok(result)
    }

    /// Family-free witness graph on `t` vertices with the best known edge
    /// count (extremal when `proved_exact`).
    pub fn extremal_target(&mut self, t: usize, r: usize, family: &ForbiddenFamily) -> Result<Hypergraph> {
        Ok(self.ex_classical(t, r, family)?.witness_subgraph)
    }
}

/// FNV-1a digest of the normalized host encoding.
fn host_digest(h: &Hypergraph) -> u64 {
    let mut acc: u64 = 0xcbf29ce484222325;
    let mut eat = |x: u64| {
        for b in x.to_le_bytes() {
            acc ^= b as u64;
            acc = acc.wrapping_mul(0x100000001b3);
        }
    };
    eat(h.uniformity() as u64);
    eat(h.vertex_count() as u64);
    for e in h.edges() {
        eat(u64::MAX);
        for &v in e {
            eat(v as u64);
        }
    }
    acc
}

/// Randomized greedy insertion plus 1-swap local search; the returned ids
/// form a family-free subgraph.
fn greedy_incumbent(host: &Hypergraph, family: &ForbiddenFamily, restarts: u64) -> Vec<usize> {
    let m = host.edge_count();
    let mut best: Vec<usize> = Vec::new();
    let digest = host_digest(host);
    for restart in 0..restarts {
        let mut order: Vec<usize> = (0..m).collect();
        let mut rng = stream(digest ^ 0x9e3779b97f4a7c15, restart, Stage::Search);
        order.shuffle(&mut rng);
        let mut alive = vec![false; m];
        let mut kept: Vec<usize> = Vec::new();
        for &e in &order {
            alive[e] = true;
            if family.find_in_masked(host, Some(&alive), Some(e)).is_none() {
                kept.push(e);
            } else {
                alive[e] = false;
            }
        }
        // 1-swap: drop one kept edge to admit one new edge, then refill
        let mut improved = true;
        while improved {
            improved = false;
            let absent: Vec<usize> = (0..m).filter(|&e| !alive[e]).collect();
            'swap: for &enter in &absent {
                for i in 0..kept.len() {
                    let leave = kept[i];
                    alive[leave] = false;
                    alive[enter] = true;
                    if family.find_in_masked(host, Some(&alive), Some(enter)).is_none() {
                        // keep the swap, then refill greedily
                        kept[i] = enter;
                        let mut gained = false;
                        for e in 0..m {
                            if !alive[e] {
                                alive[e] = true;
                                if family.find_in_masked(host, Some(&alive), Some(e)).is_none() {
                                    kept.push(e);
                                    gained = true;
                                } else {
                                    alive[e] = false;
                                }
                            }
                        }
                        if gained {
                            improved = true;
                            break 'swap;
                        }
                        // swap without gain: revert to keep determinism simple
                        alive[enter] = false;
                        alive[leave] = true;
                        kept[i] = leave;
                    } else {
                        alive[enter] = false;
                        alive[leave] = true;
                    }
                }
            }
        }
        if kept.len() > best.len() {
            best = kept;
            best.sort_unstable();
        }
    }
    best
}

struct Bb<'a> {
    host: &'a Hypergraph,
    family: &'a ForbiddenFamily,
    order_rank: Vec<usize>,
    nodes: u64,
    budget: u64,
    budget_hit: bool,
    best: Vec<usize>,
}

/// Exact search. `incumbent` must be family-free.
fn branch_and_bound(
    host: &Hypergraph,
    family: &ForbiddenFamily,
    incumbent: Vec<usize>,
    budget: u64,
) -> OracleResult {
    let m = host.edge_count();
    // static branching order: descending degree-sum, ties by id
    let mut order: Vec<usize> = (0..m).collect();
    let degree_sum =
        |e: usize| -> usize { host.edge(e).iter().map(|&v| host.degree(v)).sum() };
    order.sort_by_key(|&e| (std::cmp::Reverse(degree_sum(e)), e));
    let mut order_rank = vec![0usize; m];
    for (rank, &e) in order.iter().enumerate() {
        order_rank[e] = rank;
    }
    let mut bb = Bb { host, family, order_rank, nodes: 0, budget, budget_hit: false, best: incumbent };
    let kept: Vec<usize> = Vec::new();
    let undecided = vec![true; m];
    bb.search(&kept, undecided, m);
    let best = bb.best.clone();
    OracleResult {
        optimum: best.len(),
        witness_subgraph: host.subgraph(&best),
        proved_exact: !bb.budget_hit,
        nodes_explored: bb.nodes,
    }
}

impl Bb<'_> {
    /// `kept` is family-free; `undecided` marks edges still available.
    fn search(&mut self, kept: &[usize], undecided: Vec<bool>, undecided_count: usize) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.budget_hit = true;
            return;
        }
        if kept.len() + undecided_count <= self.best.len() {
            return;
        }
        // candidate graph: kept plus undecided
        let mut alive = undecided.clone();
        for &e in kept {
            alive[e] = true;
        }
        let witness = self.family.find_in_masked(self.host, Some(&alive), None);
        let witness = match witness {
            None => {
                let mut all: Vec<usize> = kept.to_vec();
                all.extend((0..alive.len()).filter(|&e| undecided[e]));
                all.sort_unstable();
                self.best = all;
                return;
            }
            Some(w) => w,
        };
        let mut open: Vec<usize> =
            witness.edge_ids().into_iter().filter(|&e| undecided[e]).collect();
        debug_assert!(!open.is_empty(), "kept edges alone are family-free");
        open.sort_by_key(|&e| self.order_rank[e]);
        // branch i: exclude open[i], force open[..i] in
        let mut forced_kept = kept.to_vec();
        let mut rest = undecided;
        let mut rest_count = undecided_count;
        for i in 0..open.len() {
            if self.budget_hit {
                return;
            }
            let excluded = open[i];
            let mut branch_rest = rest.clone();
            branch_rest[excluded] = false;
            self.search(&forced_kept, branch_rest, rest_count - 1);
            // for later branches this edge is forced in; check feasibility
            rest[excluded] = false;
            rest_count -= 1;
            forced_kept.push(excluded);
            let mut probe = vec![false; self.host.edge_count()];
            for &e in &forced_kept {
                probe[e] = true;
            }
            if self
                .family
                .find_in_masked(self.host, Some(&probe), Some(excluded))
                .is_some()
            {
                // forcing this edge in already creates a member: no
                // further branch can contain all of open[..=i]
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::naive::max_family_free_naive;
    use crate::hosts::{complete, sunflower};

    fn fam(spec: &str, r: usize) -> ForbiddenFamily {
        ForbiddenFamily::parse(spec, r).unwrap()
    }

    #[test]
    fn triangle_free_k4_has_four_edges() {
        let mut oracle = Oracle::new();
        let res = oracle.ex_classical(4, 2, &fam("berge:3", 2)).unwrap();
        assert!(res.proved_exact);
        assert_eq!(res.optimum, 4);
    }

    #[test]
    fn linear_triple_systems_on_seven_points() {
        let mut oracle = Oracle::new();
        let res = oracle.ex_classical(7, 3, &fam("berge-upto:2", 3)).unwrap();
        assert!(res.proved_exact);
        assert_eq!(res.optimum, 7);
    }

    #[test]
    fn girth_five_graphs_on_five_points() {
        let mut oracle = Oracle::new();
        let res = oracle.ex_classical(5, 2, &fam("berge-upto:4", 2)).unwrap();
        assert!(res.proved_exact);
        assert_eq!(res.optimum, 5); // the 5-cycle
    }

    #[test]
    fn free_host_keeps_everything() {
        let mut oracle = Oracle::new();
        let host = sunflower(6, 2, 3);
        let res = oracle.ex_relative(&host, &fam("loose:3", 3)).unwrap();
        assert_eq!(res.optimum, 6);
        assert!(res.proved_exact);
    }

    #[test]
    fn trivially_satisfiable_family_keeps_complete_host() {
        let mut oracle = Oracle::new();
        // no 20-edge Berge cycle fits in a 10-edge host
        let res = oracle.ex_classical(5, 3, &fam("berge:20", 3)).unwrap();
        assert_eq!(res.optimum, 10);
    }

    #[test]
    fn sunflower_pattern_on_sunflower_host() {
        let mut oracle = Oracle::new();
        let host = sunflower(6, 2, 3);
        let pattern = sunflower(4, 2, 3);
        let family = ForbiddenFamily::new(
            crate::families::FamilyKind::ExplicitPatterns(vec![pattern]),
            3,
        )
        .unwrap();
        let res = oracle.ex_relative(&host, &family).unwrap();
        assert!(res.proved_exact);
        assert_eq!(res.optimum, 3);
    }

    #[test]
    fn matches_subset_scan_on_small_hosts() {
        let mut oracle = Oracle::new();
        for (spec, host) in [
            ("berge-upto:3", complete(5, 3)),
            ("loose:3", complete(6, 3)),
            ("union(berge-upto-nosun:4;sunflower-plus:4)", complete(5, 3)),
            ("berge:3", complete(6, 2)),
        ] {
            let family = fam(spec, host.uniformity());
            let res = oracle.ex_relative(&host, &family).unwrap();
            assert!(res.proved_exact, "{} should be exact", spec);
            let naive = max_family_free_naive(&host, &family);
            assert_eq!(res.optimum, naive, "family {}", spec);
            assert!(family.is_free(&res.witness_subgraph));
            assert_eq!(res.witness_subgraph.edge_count(), res.optimum);
        }
    }

    #[test]
    fn monotone_in_the_family() {
        let mut oracle = Oracle::new();
        let host = crate::hosts::random_host(10, 3, 0.25, 9);
        let wide = fam("berge-upto:4", 3);
        let narrow = fam("berge-upto:3", 3);
        let a = oracle.ex_relative(&host, &wide).unwrap();
        let b = oracle.ex_relative(&host, &narrow).unwrap();
        assert!(a.optimum <= b.optimum);
    }

    #[test]
    fn cache_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let first = {
            let mut oracle = Oracle::new();
            oracle.attach_cache(path.clone()).unwrap();
            oracle.ex_classical(6, 3, &fam("berge-upto:3", 3)).unwrap()
        };
        let mut oracle = Oracle::new();
        oracle.attach_cache(path).unwrap();
        oracle.node_budget = 1; // a cache hit must not re-search
        let second = oracle.ex_classical(6, 3, &fam("berge-upto:3", 3)).unwrap();
        assert_eq!(first, second);
    }
}
