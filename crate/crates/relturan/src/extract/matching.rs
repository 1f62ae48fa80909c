//! Matching-prefix extraction on partite hosts with regular prefix
//! codegrees.
//!
//! Pipeline per pass: sparsify the projected prefix k-graph, drop
//! hyperedges at over-degree vertices together with the whole class of
//! their projected edge, take a greedy matching on the surviving projected
//! graph, contract each matching edge to a single vertex, run the inner
//! extractor on the contracted graph, and lift its output back to
//! hyperedges. The lift keeps the prefix a matching, so anything whose
//! matching-prefix projections the inner output avoids cannot occur.

use std::collections::BTreeMap;

use rand::Rng;

use super::{
    clamp_probability, codegree::sparsification_rate, guarded_ln, subseed, ExtractionReport,
    ExtractorConfig, StageRecord,
};
use crate::error::{Error, Result};
use crate::families::ForbiddenFamily;
use crate::hypergraph::{Hypergraph, Partition};
use crate::oracle::Oracle;
use crate::reductions::greedy_matching;
use crate::rng::{stream, Stage};

/// Inner extractor applied to the contracted `(r-k+1)`-graph.
#[derive(Clone, Debug)]
pub enum InnerSpec {
    /// Keep the contracted graph whole (for families whose matching-prefix
    /// projections are empty).
    Identity,
    /// Recurse with the Berge pipeline at the lower uniformity, avoiding
    /// non-sunflower Berge cycles and sunflower-plus members up to `ell`.
    BergePipeline { ell: usize },
}

/// Runs the matching-prefix route. The prefix k-sets of `h` under `p` must
/// all have k-degree in `[d, 2d)`.
pub fn matching_extract(
    h: &Hypergraph,
    partition: &Partition,
    k: usize,
    d: f64,
    family: Option<&ForbiddenFamily>,
    inner: &InnerSpec,
    cfg: &ExtractorConfig,
    oracle: &mut Oracle,
) -> Result<ExtractionReport> {
    cfg.validate()?;
    validate_prefix_window(h, partition, k, d)?;
    let mut best: Option<(Vec<usize>, Vec<StageRecord>)> = None;
    let mut trial_log = Vec::with_capacity(cfg.trials);
    for trial in 0..cfg.trials {
        let (ids, trace) = one_pass(h, partition, k, d, inner, cfg, oracle, trial as u64)?;
        trial_log.push(ids.len());
        if best.as_ref().map_or(true, |(b, _)| ids.len() > b.len()) {
            best = Some((ids, trace));
        }
    }
    let (kept, trace) = best.unwrap_or_default();
    let retained = h.subgraph(&kept);
    let mut report = ExtractionReport::build(h, retained, family, cfg.verify);
    report.trial_log = trial_log;
    let delta = h.degree_profile().max_degree.max(1);
    report.guarantee = Some(h.edge_count() as f64 * d * guarded_ln(delta as f64) / (2.0 * delta as f64));
    for s in &trace {
        for f in &s.flags {
            if !report.flags.contains(f) {
                report.flags.push(f.clone());
            }
        }
    }
    report.pipeline_trace = trace;
    Ok(report)
}

fn validate_prefix_window(h: &Hypergraph, p: &Partition, k: usize, d: f64) -> Result<()> {
    if !p.is_valid_for(h) {
        return Err(Error::invalid("matching extraction needs a valid r-partition"));
    }
    if k == 0 || k >= h.uniformity() {
        return Err(Error::invalid("matching extraction needs 1 <= k < r"));
    }
    if d <= 0.0 {
        return Err(Error::invalid("degree scale must be positive"));
    }
    for e in h.edges() {
        let s = prefix_of(e, p, k);
        let deg = h.count_superedges(&s) as f64;
        if deg < d || deg >= 2.0 * d {
            return Err(Error::invalid(format!(
                "prefix degree {} outside [{}, {})",
                deg,
                d,
                2.0 * d
            )));
        }
    }
    Ok(())
}

fn prefix_of(edge: &[usize], p: &Partition, k: usize) -> Vec<usize> {
    let mut s: Vec<usize> = edge.iter().copied().filter(|&v| p.part_of(v) < k).collect();
    s.sort_unstable();
    s
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn one_pass(
    h: &Hypergraph,
    partition: &Partition,
    k: usize,
    d: f64,
    inner: &InnerSpec,
    cfg: &ExtractorConfig,
    oracle: &mut Oracle,
    trial: u64,
) -> Result<(Vec<usize>, Vec<StageRecord>)> {
    let r = h.uniformity();
    let m = h.edge_count();
    let mut trace = Vec::new();
    let delta = h.degree_profile().max_degree.max(1);
    let ln_delta = guarded_ln(delta as f64);
    let guard_ok = d <= delta as f64 / ln_delta;

    // prefix classes: projected k-sets and the hyperedges over them
    let mut classes: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (id, e) in h.edges().iter().enumerate() {
        classes.entry(prefix_of(e, partition, k)).or_default().push(id);
    }

    // sparsify the projected graph
    let (p_rate, clamped) =
        clamp_probability(cfg.p_override.unwrap_or_else(|| sparsification_rate(d, delta)));
    let mut rng = stream(subseed(cfg.seed, &[trial, 0xA1]), trial, Stage::EdgeSample);
    let kept_classes: BTreeMap<&Vec<usize>, &Vec<usize>> = classes
        .iter()
        .filter(|_| rng.gen::<f64>() < p_rate)
        .collect();
    let sampled: Vec<usize> =
        kept_classes.values().flat_map(|ids| ids.iter().copied()).collect();
    let mut stage = StageRecord::new("prefix-sample", m, sampled.len())
        .param("p", p_rate)
        .param("classes", classes.len() as f64)
        .ids(sorted(&sampled));
    if clamped {
        stage = stage.flag("p-clamped");
    }
    if !guard_ok {
        stage = stage.flag("degree-window-guard-unsatisfied");
    }
    trace.push(stage);

    // prune over-degree vertices and the full class of each touched prefix
    let threshold = 8.0 * d * ln_delta.powi(3);
    let mut degree = vec![0usize; h.vertex_count()];
    for &id in &sampled {
        for &v in h.edge(id) {
            degree[v] += 1;
        }
    }
    let over: Vec<bool> = degree.iter().map(|&x| x as f64 > threshold).collect();
    let bad_classes: std::collections::BTreeSet<Vec<usize>> = sampled
        .iter()
        .filter(|&&id| h.edge(id).iter().any(|&v| over[v]))
        .map(|&id| prefix_of(h.edge(id), partition, k))
        .collect();
    let surviving: Vec<usize> = sampled
        .iter()
        .copied()
        .filter(|&id| !bad_classes.contains(&prefix_of(h.edge(id), partition, k)))
        .collect();
    trace.push(
        StageRecord::new("overdegree-prune", sampled.len(), surviving.len())
            .param("threshold", threshold)
            .param("pruned_classes", bad_classes.len() as f64)
            .param(
                "pruned_fraction",
                if sampled.is_empty() {
                    0.0
                } else {
                    (sampled.len() - surviving.len()) as f64 / sampled.len() as f64
                },
            )
            .ids(sorted(&surviving)),
    );

    if surviving.is_empty() {
        trace.push(StageRecord::new("degenerate-empty", 0, 0).flag("degenerate"));
        return Ok((Vec::new(), trace));
    }

    // greedy matching on the surviving projected k-graph
    let survivors_by_class: BTreeMap<Vec<usize>, Vec<usize>> = {
        let mut map: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for &id in &surviving {
            map.entry(prefix_of(h.edge(id), partition, k)).or_default().push(id);
        }
        map
    };
    let projected = Hypergraph::from_edge_sets(
        k,
        h.vertex_count(),
        survivors_by_class.keys().cloned().collect(),
    )?;
    let matching = greedy_matching(&projected);
    let matched_prefixes: Vec<Vec<usize>> =
        matching.edge_ids.iter().map(|&i| projected.edge(i).to_vec()).collect();
    let over_matching: Vec<usize> = matched_prefixes
        .iter()
        .flat_map(|p| survivors_by_class[p].iter().copied())
        .collect();
    trace.push(
        StageRecord::new("prefix-matching", surviving.len(), over_matching.len())
            .param("matching_size", matched_prefixes.len() as f64)
            .ids(sorted(&over_matching)),
    );

    // contract matching prefixes to single vertices
    let suffix_vertices: Vec<usize> = {
        let mut vs: Vec<usize> = over_matching
            .iter()
            .flat_map(|&id| h.edge(id).iter().copied())
            .filter(|&v| partition.part_of(v) >= k)
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    };
    let mut vertex_index: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, &v) in suffix_vertices.iter().enumerate() {
        vertex_index.insert(v, matched_prefixes.len() + i);
    }
    let prefix_index: BTreeMap<Vec<usize>, usize> = matched_prefixes
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let contracted_n = matched_prefixes.len() + suffix_vertices.len();
    let mut contracted_edges = Vec::with_capacity(over_matching.len());
    let mut lift: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for &id in &over_matching {
        let prefix = prefix_of(h.edge(id), partition, k);
        let mut ce = vec![prefix_index[&prefix]];
        for &v in h.edge(id) {
            if partition.part_of(v) >= k {
                ce.push(vertex_index[&v]);
            }
        }
        ce.sort_unstable();
        lift.insert(ce.clone(), id);
        contracted_edges.push(ce);
    }
    let contracted = Hypergraph::from_edge_sets(r - k + 1, contracted_n, contracted_edges)?;

    // inner extraction on the contracted graph
    let (inner_kept, inner_flags) = match inner {
        InnerSpec::Identity => (contracted.clone(), Vec::new()),
        InnerSpec::BergePipeline { ell } => {
            let sub_cfg = ExtractorConfig {
                seed: subseed(cfg.seed, &[trial, 0xB2]),
                trials: 1,
                verify: false,
                ..cfg.clone()
            };
            let inner_report =
                super::pipelines::pipeline_berge(&contracted, *ell, &sub_cfg, oracle)?;
            (inner_report.retained, inner_report.flags)
        }
    };
    let lifted: Vec<usize> = inner_kept
        .edges()
        .iter()
        .filter_map(|ce| lift.get(ce).copied())
        .collect();
    let mut stage = StageRecord::new("contract-and-lift", over_matching.len(), lifted.len())
        .param("contracted_vertices", contracted_n as f64)
        .param("contracted_edges", contracted.edge_count() as f64)
        .ids(sorted(&lifted));
    for f in inner_flags {
        stage = stage.flag(&format!("inner:{}", f));
    }
    trace.push(stage);
    Ok((sorted(&lifted), trace))
}

fn sorted(ids: &[usize]) -> Vec<usize> {
    let mut v = ids.to_vec();
    v.sort_unstable();
    v
}
