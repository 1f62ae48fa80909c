//! Command-line front end: host generation, detection, the extremal
//! oracle, extraction pipelines, and batch experiments.
//!
//! Exit codes: 0 success, 2 verification failure, 3 resource/budget
//! exhaustion, 4 invalid input, 1 anything else.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use relturan::error::Error;
use relturan::extract::ExtractorConfig;
use relturan::families::ForbiddenFamily;
use relturan::harness::{self, ExperimentPlan, PipelineKind};
use relturan::hosts::{generate, HostSpec};
use relturan::hypergraph::Hypergraph;
use relturan::io::{read_hg, write_hg};
use relturan::oracle::Oracle;

#[derive(Parser)]
#[command(name = "relturan", about = "Certified cycle-free subgraph extraction for uniform hypergraphs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a host hypergraph from a spec string.
    Gen {
        /// e.g. complete:7,3 | sunflower:7,2,3 | random:20,3,0.05,seed=42 |
        /// partite:2,3,4 | linear-random:30,3,0.02,seed=7
        #[arg(long)]
        spec: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Detect a forbidden family in a host; prints verdict and witness.
    Detect {
        /// e.g. berge:4 | berge-upto:4 | berge-nosun:4 | berge-upto-nosun:4
        /// | loose:3 | sunflower-plus:4 | f5 | union(berge:2;loose:3)
        #[arg(long)]
        family: String,
        #[arg(long)]
        input: PathBuf,
    },
    /// Exact (or flagged inexact) maximum family-free subgraph.
    Oracle {
        /// Path to a .hg file or `complete:t,r`.
        #[arg(long)]
        host: String,
        #[arg(long)]
        family: String,
        /// Node budget for the exact search.
        #[arg(long)]
        budget: Option<u64>,
        /// Cache file (also via RELTURAN_CACHE).
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Run an extraction pipeline and print the report as JSON.
    Extract(ExtractArgs),
    /// Batch experiments.
    Experiment {
        #[command(subcommand)]
        command: ExperimentCommand,
    },
}

#[derive(Args)]
struct ExtractArgs {
    /// berge | b53 | f5 | loose
    #[arg(long)]
    pipeline: String,
    /// Cycle length for berge/loose.
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    host: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Override the homomorphism target size.
    #[arg(long)]
    t: Option<usize>,
    /// Override sparsification probabilities.
    #[arg(long)]
    p: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the retained subgraph as .hg.
    #[arg(long)]
    retained: Option<PathBuf>,
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Execute a plan file (JSON).
    Run {
        plan: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Fit the density exponent of a result file.
    Fit {
        results: PathBuf,
        /// Reference exponent printed alongside the fit.
        #[arg(long)]
        reference: Option<f64>,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(match e {
                Error::InvalidInput(_) | Error::Parse(_) => 4u8,
                Error::ResourceLimit(_) => 3u8,
                Error::Verification(_) => 2u8,
                _ => 1u8,
            })
        }
    }
}

fn load_host(spec: &str) -> Result<Hypergraph, Error> {
    if spec.contains(':') && !std::path::Path::new(spec).exists() {
        generate(&HostSpec::parse(spec)?)
    } else {
        read_hg(spec)
    }
}

fn oracle_with(cache: Option<PathBuf>) -> Result<Oracle, Error> {
    let mut oracle = Oracle::from_env();
    if let Some(path) = cache {
        oracle.attach_cache(path)?;
    }
    Ok(oracle)
}

fn run() -> Result<ExitCode, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen { spec, out } => {
            let host = generate(&HostSpec::parse(&spec)?)?;
            write_hg(&out, &host)?;
            println!(
                "{}",
                serde_json::json!({
                    "spec": spec,
                    "vertices": host.vertex_count(),
                    "edges": host.edge_count(),
                    "out": out,
                })
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Detect { family, input } => {
            let host = read_hg(&input)?;
            let fam = ForbiddenFamily::parse(&family, host.uniformity())?;
            let witness = fam.find_in(&host);
            let found = witness.is_some();
            println!(
                "{}",
                serde_json::json!({
                    "family": fam.canonical_string(),
                    "contains": found,
                    "witness": witness,
                })
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { host, family, budget, cache } => {
            let h = load_host(&host)?;
            let fam = ForbiddenFamily::parse(&family, h.uniformity())?;
            let mut oracle = oracle_with(cache)?;
            if let Some(b) = budget {
                oracle.node_budget = b;
            }
            let result = oracle.ex_relative(&h, &fam)?;
            println!("{}", serde_json::to_string_pretty(&result)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Extract(args) => {
            let host = read_hg(&args.host)?;
            let pipeline = PipelineKind::parse(&args.pipeline)?;
            let mut cfg = ExtractorConfig::new(args.seed).with_trials(args.trials);
            cfg.t_override = args.t;
            cfg.p_override = args.p;
            let mut oracle = oracle_with(args.cache)?;
            let report = harness::run_one(&host, pipeline, args.ell, &cfg, &mut oracle)?;
            let text = serde_json::to_string_pretty(&report)?;
            match &args.out {
                Some(path) => std::fs::write(path, text)?,
                None => println!("{}", text),
            }
            if let Some(path) = &args.retained {
                write_hg(path, &report.retained)?;
            }
            if report.verify_ran && !report.verified_free {
                return Err(Error::Verification("extraction output failed verification".into()));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Experiment { command } => match command {
            ExperimentCommand::Run { plan, jobs } => {
                let plan = ExperimentPlan::from_json(&std::fs::read_to_string(plan)?)?;
                let summary = harness::run_plan(&plan, jobs)?;
                println!(
                    "{}",
                    serde_json::json!({
                        "records": summary.records,
                        "reused": summary.reused,
                        "verification_failures": summary.verification_failures,
                        "out": plan.out,
                    })
                );
                if summary.verification_failures > 0 {
                    return Ok(ExitCode::from(2u8));
                }
                Ok(ExitCode::SUCCESS)
            }
            ExperimentCommand::Fit { results, reference } => {
                let records = harness::read_records(&results)?;
                let fit = harness::fit_exponent(&records, reference)?;
                println!("{}", serde_json::to_string_pretty(&fit)?);
                Ok(ExitCode::SUCCESS)
            }
        },
    }
}
