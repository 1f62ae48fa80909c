//! Sparsify-and-delete extraction.
//!
//! Keep each edge independently with probability `p`, enumerate every copy
//! of the forbidden structure in the sample, then delete one edge per copy
//! (greedy hitting, most-covering edge first). The survivor is free by
//! construction and is re-verified when `verify` is on.

use rand::Rng;

use super::{clamp_probability, ExtractionReport, ExtractorConfig, StageRecord};
use crate::error::{Error, Result};
use crate::families::{loose, FamilyKind, ForbiddenFamily, View};
use crate::hypergraph::Hypergraph;
use crate::rng::{stream, Stage};

const COPY_BUDGET: usize = 2_000_000;

/// Runs the deletion method at rate `p` (or `cfg.p_override`).
pub fn deletion_extract(
    h: &Hypergraph,
    family: &ForbiddenFamily,
    p: f64,
    cfg: &ExtractorConfig,
) -> Result<ExtractionReport> {
    cfg.validate()?;
    if h.uniformity() != family.uniformity() {
        return Err(Error::invalid("host and family uniformity differ"));
    }
    let (p, clamped) = clamp_probability(cfg.p_override.unwrap_or(p));
    ensure_enumerable(family.kind())?;

    let mut best: Option<Vec<usize>> = None;
    let mut best_stats = (0usize, 0usize); // (sampled, copies)
    let mut trial_log = Vec::with_capacity(cfg.trials);
    for trial in 0..cfg.trials {
        let mut rng = stream(cfg.seed, trial as u64, Stage::EdgeSample);
        let sampled: Vec<usize> =
            (0..h.edge_count()).filter(|_| rng.gen::<f64>() < p).collect();
        let copies = enumerate_copies(h, &sampled, family.kind())?;
        let kept = hit_and_keep(&sampled, &copies);
        trial_log.push(kept.len());
        if best.as_ref().map_or(true, |b| kept.len() > b.len()) {
            best_stats = (sampled.len(), copies.len());
            best = Some(kept);
        }
    }
    let kept = best.unwrap_or_default();
    let retained = h.subgraph(&kept);
    let mut report = ExtractionReport::build(h, retained, Some(family), cfg.verify);
    report.trial_log = trial_log;
    let mut stage = StageRecord::new("sparsify-and-delete", h.edge_count(), report.achieved)
        .param("p", p)
        .param("sampled", best_stats.0 as f64)
        .param("copies", best_stats.1 as f64)
        .ids(kept);
    if clamped {
        stage = stage.flag("p-clamped");
        report.flags.push("p-clamped".to_string());
    }
    report.guarantee = Some(expected_size_guarantee(h, family, p)?);
    report.pipeline_trace.push(stage);
    Ok(report)
}

/// `p*e(H) - p^{edges(copy)} * N(H)`: the expected sample size minus the
/// expected number of surviving copies (each deletion costs one edge).
pub fn expected_size_guarantee(h: &Hypergraph, family: &ForbiddenFamily, p: f64) -> Result<f64> {
    let mut total = p * h.edge_count() as f64;
    match family.kind() {
        FamilyKind::LooseCycle(ell) => {
            let n = loose::count_loose_cycles(h, *ell) as f64;
            total -= p.powi(*ell as i32) * n;
        }
        FamilyKind::F5 => {
            let n = crate::families::f5::count_f5(h)? as f64;
            total -= p.powi(4) * n;
        }
        FamilyKind::Union(kinds) => {
            for k in kinds {
                let sub = ForbiddenFamily::new(k.clone(), family.uniformity())?;
                total -= p * h.edge_count() as f64;
                total += expected_size_guarantee(h, &sub, p)?;
            }
        }
        _ => return Err(Error::invalid("family has no copy counter")),
    }
    Ok(total)
}

fn ensure_enumerable(kind: &FamilyKind) -> Result<()> {
    match kind {
        FamilyKind::LooseCycle(_) | FamilyKind::F5 => Ok(()),
        FamilyKind::Union(kinds) => kinds.iter().try_for_each(ensure_enumerable),
        _ => Err(Error::invalid(
            "deletion extraction needs a family with enumerable copies (loose cycles, the four-edge pattern, or unions of them)",
        )),
    }
}

/// All copies (as sorted edge-id sets) of the family inside the sampled
/// edge set.
fn enumerate_copies(
    h: &Hypergraph,
    sampled: &[usize],
    kind: &FamilyKind,
) -> Result<Vec<Vec<usize>>> {
    let mut alive = vec![false; h.edge_count()];
    for &e in sampled {
        alive[e] = true;
    }
    let mut out = Vec::new();
    collect_copies(h, &alive, kind, &mut out)?;
    out.sort();
    out.dedup();
    Ok(out)
}

fn collect_copies(
    h: &Hypergraph,
    alive: &[bool],
    kind: &FamilyKind,
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    match kind {
        FamilyKind::LooseCycle(ell) => {
            let view = View { h, alive: Some(alive) };
            let mut over_budget = false;
            loose::collect_copies(view, *ell, &mut |ids| {
                out.push(ids);
                out.len() > COPY_BUDGET
            });
            if out.len() > COPY_BUDGET {
                over_budget = true;
            }
            if over_budget {
                return Err(Error::resource("loose-cycle copy enumeration over budget"));
            }
            Ok(())
        }
        FamilyKind::F5 => {
            crate::families::f5::collect_copies(h, alive, out);
            if out.len() > COPY_BUDGET {
                return Err(Error::resource("pattern copy enumeration over budget"));
            }
            Ok(())
        }
        FamilyKind::Union(kinds) => {
            kinds.iter().try_for_each(|k| collect_copies(h, alive, k, out))
        }
        _ => Err(Error::invalid("family has no copy enumerator")),
    }
}

/// Greedy hitting: repeatedly delete the edge lying in the most remaining
/// copies (ties to the smallest id) until no copy survives.
fn hit_and_keep(sampled: &[usize], copies: &[Vec<usize>]) -> Vec<usize> {
    if copies.is_empty() {
        return sampled.to_vec();
    }
    let mut deleted: std::collections::HashSet<usize> = Default::default();
    let mut remaining: Vec<&Vec<usize>> = copies.iter().collect();
    while !remaining.is_empty() {
        let mut counts: std::collections::BTreeMap<usize, usize> = Default::default();
        for c in &remaining {
            for &e in c.iter() {
                *counts.entry(e).or_insert(0) += 1;
            }
        }
        let (&victim, _) = counts
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .unwrap();
        deleted.insert(victim);
        remaining.retain(|c| !c.contains(&victim));
    }
    sampled.iter().copied().filter(|e| !deleted.contains(e)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hosts::{complete, loose_cycle};

    #[test]
    fn keeps_everything_when_family_absent() {
        let h = crate::hosts::sunflower(5, 2, 3);
        let family = ForbiddenFamily::parse("loose:3", 3).unwrap();
        let cfg = ExtractorConfig::new(0);
        let report = deletion_extract(&h, &family, 1.0, &cfg).unwrap();
        assert_eq!(report.achieved, 5);
        assert!(report.verified_free);
    }

    #[test]
    fn single_copy_costs_one_edge() {
        let h = loose_cycle(4, 3);
        let family = ForbiddenFamily::parse("loose:4", 3).unwrap();
        let cfg = ExtractorConfig::new(0);
        let report = deletion_extract(&h, &family, 1.0, &cfg).unwrap();
        assert_eq!(report.achieved, 3);
        assert!(report.verified_free);
    }

    #[test]
    fn outputs_are_always_free() {
        let h = complete(7, 3);
        let family = ForbiddenFamily::parse("loose:3", 3).unwrap();
        for seed in 0..10 {
            let cfg = ExtractorConfig::new(seed).with_trials(4);
            let report = deletion_extract(&h, &family, 0.5, &cfg).unwrap();
            assert!(report.verified_free, "seed {}", seed);
        }
    }

    #[test]
    fn rejects_families_without_counters() {
        let h = complete(5, 3);
        let family = ForbiddenFamily::parse("berge:3", 3).unwrap();
        let cfg = ExtractorConfig::new(0);
        assert!(deletion_extract(&h, &family, 0.5, &cfg).is_err());
    }
}
