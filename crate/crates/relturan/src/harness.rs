//! Batch experiment runner: sweeps hosts, runs a pipeline per (host,
//! seed), writes one JSON record per line plus a CSV projection, and fits
//! empirical density exponents.
//!
//! Runs are resumable: records already present in the output file are
//! reused verbatim (byte-for-byte), so an interrupted sweep finishes into
//! the same file an uninterrupted one would produce. The final write goes
//! through a temp file and rename.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extract::{
    pipeline_b53, pipeline_berge, pipeline_f5, pipeline_loose, ExtractionReport, ExtractorConfig,
};
use crate::hosts::{generate, HostSpec};
use crate::hypergraph::Hypergraph;
use crate::oracle::{Oracle, OracleResult};

/// Which pipeline a plan runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PipelineKind {
    Berge,
    B53,
    F5,
    Loose,
}

impl PipelineKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "berge" => Ok(PipelineKind::Berge),
            "b53" => Ok(PipelineKind::B53),
            "f5" => Ok(PipelineKind::F5),
            "loose" => Ok(PipelineKind::Loose),
            other => Err(Error::parse(format!("unknown pipeline {:?}", other))),
        }
    }

    pub fn needs_ell(self) -> bool {
        matches!(self, PipelineKind::Berge | PipelineKind::Loose)
    }
}

/// A batch of (host, seed) extraction runs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub hosts: Vec<String>,
    pub pipeline: PipelineKind,
    #[serde(default)]
    pub ell: Option<usize>,
    pub seeds: Vec<u64>,
    pub trials: usize,
    pub out: PathBuf,
    #[serde(default)]
    pub oracle_compare: bool,
    /// Oracle comparison is skipped for hosts above this edge count.
    #[serde(default = "default_oracle_ceiling")]
    pub oracle_edge_ceiling: usize,
}

fn default_oracle_ceiling() -> usize {
    25
}

impl ExperimentPlan {
    pub fn from_json(text: &str) -> Result<Self> {
        let plan: ExperimentPlan = serde_json::from_str(text)?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if self.hosts.is_empty() && !self.seeds.is_empty() {
            // an empty sweep is allowed; it produces an empty result file
        }
        if self.pipeline.needs_ell() && self.ell.is_none() {
            return Err(Error::invalid("this pipeline needs an ell"));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        for spec in &self.hosts {
            HostSpec::parse(spec)?;
        }
        Ok(())
    }
}

/// One line of a result file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunRecord {
    pub key: String,
    pub host: String,
    pub seed: u64,
    pub pipeline: PipelineKind,
    #[serde(default)]
    pub ell: Option<usize>,
    pub host_edges: usize,
    pub host_max_degree: usize,
    pub report: ExtractionReport,
    #[serde(default)]
    pub oracle: Option<OracleResult>,
}

/// Summary returned by [`run_plan`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunSummary {
    pub records: usize,
    pub reused: usize,
    pub verification_failures: usize,
}

fn record_key(host: &str, seed: u64, pipeline: PipelineKind, ell: Option<usize>, trials: usize) -> String {
    format!("{}|seed={}|{:?}|ell={:?}|trials={}", host, seed, pipeline, ell, trials)
}

/// Runs one pipeline invocation for a record.
pub fn run_one(
    host: &Hypergraph,
    pipeline: PipelineKind,
    ell: Option<usize>,
    cfg: &ExtractorConfig,
    oracle: &mut Oracle,
) -> Result<ExtractionReport> {
    match pipeline {
        PipelineKind::Berge => pipeline_berge(host, ell.unwrap_or(4), cfg, oracle),
        PipelineKind::B53 => pipeline_b53(host, cfg, oracle),
        PipelineKind::F5 => pipeline_f5(host, cfg, oracle),
        PipelineKind::Loose => pipeline_loose(host, ell.unwrap_or(4), cfg, oracle),
    }
}

/// Executes the plan with `jobs` worker threads, writing JSON lines and a
/// CSV projection next to them. Returns counts; any verification failure
/// must be turned into a nonzero exit by the caller.
pub fn run_plan(plan: &ExperimentPlan, jobs: usize) -> Result<RunSummary> {
    plan.validate()?;
    let existing = read_existing_lines(&plan.out)?;
    let mut work: Vec<(String, String, u64)> = Vec::new();
    for host in &plan.hosts {
        for &seed in &plan.seeds {
            let key = record_key(host, seed, plan.pipeline, plan.ell, plan.trials);
            work.push((key, host.clone(), seed));
        }
    }
    let reused = work.iter().filter(|(k, _, _)| existing.contains_key(k)).count();

    let compute = |(key, host_spec, seed): &(String, String, u64)| -> Result<String> {
        if let Some(line) = existing.get(key) {
            return Ok(line.clone());
        }
        let spec = HostSpec::parse(host_spec)?;
        let host = generate(&spec)?;
        let mut oracle = Oracle::from_env();
        let cfg = ExtractorConfig::new(*seed).with_trials(plan.trials);
        let report = run_one(&host, plan.pipeline, plan.ell, &cfg, &mut oracle)?;
        let oracle_result = if plan.oracle_compare && host.edge_count() <= plan.oracle_edge_ceiling
        {
            let family = crate::families::ForbiddenFamily::parse(
                &report
                    .family
                    .clone()
                    .and_then(|s| s.split_once('|').map(|(_, f)| f.to_string()))
                    .ok_or_else(|| Error::invalid("report carries no family"))?,
                host.uniformity(),
            )?;
            Some(oracle.ex_relative(&host, &family)?)
        } else {
            None
        };
        let record = RunRecord {
            key: key.clone(),
            host: host_spec.clone(),
            seed: *seed,
            pipeline: plan.pipeline,
            ell: plan.ell,
            host_edges: host.edge_count(),
            host_max_degree: host.degree_profile().max_degree,
            report,
            oracle: oracle_result,
        };
        Ok(serde_json::to_string(&record)?)
    };

    let lines: Vec<String> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::invalid(format!("worker pool: {}", e)))?;
        pool.install(|| {
            use rayon::prelude::*;
            work.par_iter().map(compute).collect::<Result<Vec<_>>>()
        })?
    } else {
        work.iter().map(compute).collect::<Result<Vec<_>>>()?
    };

    write_atomically(&plan.out, &lines)?;
    write_csv_projection(&plan.out, &lines)?;

    let mut failures = 0;
    for line in &lines {
        let record: RunRecord = serde_json::from_str(line)?;
        if !record.report.verified_free {
            failures += 1;
        }
    }
    Ok(RunSummary { records: lines.len(), reused, verification_failures: failures })
}

fn read_existing_lines(path: &Path) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    if !path.exists() {
        return Ok(map);
    }
    let text = std::fs::read_to_string(path)?;
    for line in text.lines() {
        if line.is_empty() {
            continue;
        }
        // a trailing partial line (interrupted write) fails to parse and
        // is simply recomputed
        if let Ok(record) = serde_json::from_str::<RunRecord>(line) {
            map.insert(record.key, line.to_string());
        }
    }
    Ok(map)
}

fn write_atomically(path: &Path, lines: &[String]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = std::fs::File::create(&tmp)?;
        for line in lines {
            writeln!(f, "{}", line)?;
        }
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn write_csv_projection(out: &Path, lines: &[String]) -> Result<()> {
    let csv_path = out.with_extension("csv");
    let mut body = String::from("host,seed,max_degree,host_edges,achieved,ratio,verified\n");
    for line in lines {
        let r: RunRecord = serde_json::from_str(line)?;
        let ratio = if r.host_edges > 0 {
            r.report.achieved as f64 / r.host_edges as f64
        } else {
            0.0
        };
        body.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.host,
            r.seed,
            r.host_max_degree,
            r.host_edges,
            r.report.achieved,
            ratio,
            r.report.verified_free
        ));
    }
    std::fs::write(csv_path, body)?;
    Ok(())
}

/// Least-squares fit of `log(ratio)` against `log(max_degree)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExponentFit {
    /// `(max_degree, density ratio)` pairs that entered the fit.
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub stderr: f64,
    pub reference: Option<f64>,
    pub dropped_zero_density: usize,
}

/// Fits the decay exponent from swept records; points with zero density
/// are dropped with a warning counter. Seeds of the same host average
/// into one point (an extreme-value collapse would bias the slope when
/// the retained counts are small).
pub fn fit_exponent(records: &[RunRecord], reference: Option<f64>) -> Result<ExponentFit> {
    let mut acc: BTreeMap<String, (f64, f64, usize)> = BTreeMap::new();
    let mut dropped = 0usize;
    for r in records {
        if r.host_edges == 0 {
            dropped += 1;
            continue;
        }
        let ratio = r.report.achieved as f64 / r.host_edges as f64;
        if ratio <= 0.0 {
            dropped += 1;
            continue;
        }
        let entry = acc.entry(r.host.clone()).or_insert((r.host_max_degree as f64, 0.0, 0));
        entry.1 += ratio;
        entry.2 += 1;
    }
    let points: Vec<(f64, f64)> =
        acc.into_values().map(|(d, sum, count)| (d, sum / count as f64)).collect();
    fit_points(points, reference, dropped)
}

pub fn fit_points(
    mut points: Vec<(f64, f64)>,
    reference: Option<f64>,
    dropped: usize,
) -> Result<ExponentFit> {
    points.retain(|&(x, y)| x > 0.0 && y > 0.0);
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if points.len() < 3 {
        return Err(Error::invalid("exponent fit needs at least 3 positive points"));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("exponent fit needs varying degrees"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let dof = (xs.len().max(3) - 2) as f64;
    let stderr = (ss_res / dof / sxx).sqrt();
    Ok(ExponentFit { points, slope, stderr, reference, dropped_zero_density: dropped })
}

/// Reads a JSON-lines result file back into records.
pub fn read_records(path: &Path) -> Result<Vec<RunRecord>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for line in text.lines() {
        if line.is_empty() {
            continue;
        }
        out.push(serde_json::from_str(line)?);
    }
    Ok(out)
}
