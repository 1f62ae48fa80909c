//! Seeded randomized extraction of family-free subgraphs.
//!
//! Each operation takes an [`ExtractorConfig`], runs `trials` independent
//! seeded passes, and reports the best pass as an [`ExtractionReport`]
//! whose stage trace records every intermediate edge set (host edge ids),
//! the numeric parameters used, and any guard violations. With `verify`
//! on, the returned subgraph is re-checked by the family detectors; the
//! report never claims freeness it has not checked.

mod codegree;
mod deletion;
mod hom;
mod matching;
mod pipelines;

pub use codegree::{
    best_index_set, codegree_split, dyadic_class_floor, dyadic_select, heavy_any, CodegreeSplit,
    DyadicClass,
};
pub use deletion::deletion_extract;
pub use hom::random_hom_extract;
pub use matching::{matching_extract, InnerSpec};
pub use pipelines::{pipeline_b53, pipeline_berge, pipeline_f5, pipeline_loose};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::ForbiddenFamily;
use crate::hypergraph::{DegreeProfile, Hypergraph};

/// Knobs shared by every extractor.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtractorConfig {
    pub seed: u64,
    /// Independent seeded passes; the best is reported.
    pub trials: usize,
    /// Override for the homomorphism target size `t`.
    pub t_override: Option<usize>,
    /// Scale on the default `t = c_t * Delta^{1/(r-1)}`.
    pub c_t: f64,
    /// Override for sparsification probabilities.
    pub p_override: Option<f64>,
    /// Named threshold overrides (keys `D2`, `D3`, ... or `D`).
    pub thresholds: BTreeMap<String, f64>,
    /// Re-check outputs with the family detectors (default on).
    pub verify: bool,
}

impl ExtractorConfig {
    pub fn new(seed: u64) -> Self {
        ExtractorConfig {
            seed,
            trials: 1,
            t_override: None,
            c_t: 1.0,
            p_override: None,
            thresholds: BTreeMap::new(),
            verify: true,
        }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials.max(1);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if let Some(p) = self.p_override {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid("p override must lie in [0,1]"));
            }
        }
        if !(self.c_t > 0.0) {
            return Err(Error::invalid("c_t must be positive"));
        }
        Ok(())
    }
}

/// One stage of a pass: sizes, parameters, guard flags, and (for stages in
/// host edge-id space) the surviving edge ids.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: String,
    pub input_edges: usize,
    pub output_edges: usize,
    pub parameters: BTreeMap<String, f64>,
    pub flags: Vec<String>,
    /// Host edge ids after this stage; `None` for stages working in a
    /// derived (contracted or relabeled) edge space.
    pub retained_edge_ids: Option<Vec<usize>>,
}

impl StageRecord {
    pub fn new(stage: &str, input_edges: usize, output_edges: usize) -> Self {
        StageRecord {
            stage: stage.to_string(),
            input_edges,
            output_edges,
            parameters: BTreeMap::new(),
            flags: Vec::new(),
            retained_edge_ids: None,
        }
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn flag(mut self, flag: &str) -> Self {
        self.flags.push(flag.to_string());
        self
    }

    pub fn ids(mut self, ids: Vec<usize>) -> Self {
        self.retained_edge_ids = Some(ids);
        self
    }
}

/// Result of a seeded extraction: the retained subgraph, its certification
/// status, per-trial sizes, and the stage trace of the best trial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtractionReport {
    pub retained: Hypergraph,
    pub input_edges: usize,
    pub input_profile: DegreeProfile,
    /// Canonical string of the family the output avoids, when one applies.
    pub family: Option<String>,
    /// The guaranteed expected size of the construction, when the run's
    /// parameters admit one (flagged stages may void it).
    pub guarantee: Option<f64>,
    pub achieved: usize,
    /// True only when `verify` ran and the detectors found nothing.
    pub verified_free: bool,
    pub verify_ran: bool,
    pub trial_log: Vec<usize>,
    /// Per-trial counts of edges whose image was an edge of the target
    /// (homomorphism extractor only).
    pub trial_injective_hits: Option<Vec<usize>>,
    pub pipeline_trace: Vec<StageRecord>,
    pub flags: Vec<String>,
}

impl ExtractionReport {
    pub(crate) fn build(
        input: &Hypergraph,
        retained: Hypergraph,
        family: Option<&ForbiddenFamily>,
        verify: bool,
    ) -> Self {
        let achieved = retained.edge_count();
        let (verify_ran, verified_free) = match (verify, family) {
            (true, Some(f)) => (true, f.is_free(&retained)),
            _ => (false, false),
        };
        ExtractionReport {
            retained,
            input_edges: input.edge_count(),
            input_profile: input.degree_profile(),
            family: family.map(|f| f.canonical_string()),
            guarantee: None,
            achieved,
            verified_free,
            verify_ran,
            trial_log: Vec::new(),
            trial_injective_hits: None,
            pipeline_trace: Vec::new(),
            flags: Vec::new(),
        }
    }
}

/// Mixes a base seed with stage tags; used to derive nested seeds.
pub(crate) fn subseed(seed: u64, parts: &[u64]) -> u64 {
    let mut acc: u64 = seed ^ 0xcbf29ce484222325;
    for &p in parts {
        for b in p.to_le_bytes() {
            acc ^= b as u64;
            acc = acc.wrapping_mul(0x100000001b3);
        }
    }
    acc
}

/// Natural log with the small-argument guard `max(ln x, 1)`.
pub(crate) fn guarded_ln(x: f64) -> f64 {
    x.ln().max(1.0)
}

/// Clamps a probability into `[0, 1]`, reporting whether it was clamped.
pub(crate) fn clamp_probability(p: f64) -> (f64, bool) {
    if p > 1.0 {
        (1.0, true)
    } else if !(p >= 0.0) {
        (0.0, true)
    } else {
        (p, false)
    }
}
