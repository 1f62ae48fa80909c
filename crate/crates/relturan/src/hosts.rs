//! Reproducible host constructions: complete r-graphs, binomial random
//! r-graphs, sunflowers, complete partite hosts, and linear random hosts.
//!
//! Random hosts draw one `f64` per r-subset, visiting subsets in colex
//! order with a ChaCha8 stream (see [`crate::rng`]); identical spec+seed
//! always produce identical bytes.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{for_each_subset_colex, Hypergraph};
use crate::reductions::linear_subgraph;
use crate::rng::{stream, Stage};

const MAX_VERTICES: usize = 4096;
const MAX_GENERATED_EDGES: usize = 2_000_000;

/// A symbolic host description, parsable from strings such as
/// `complete:7,3`, `sunflower:7,2,3`, `random:20,3,0.05,seed=42`,
/// `partite:2,3,4`, and `linear-random:30,3,0.02,seed=7`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum HostSpec {
    Complete { n: usize, r: usize },
    Random { n: usize, r: usize, p: f64, seed: u64 },
    Sunflower { edges: usize, kernel: usize, r: usize },
    PartiteComplete { sizes: Vec<usize> },
    LinearRandom { n: usize, r: usize, p: f64, seed: u64 },
}

impl HostSpec {
    pub fn parse(s: &str) -> Result<HostSpec> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::parse(format!("host spec {:?} missing ':'", s)))?;
        let fields: Vec<&str> = rest.split(',').collect();
        let int = |f: &str| -> Result<usize> {
            f.trim().parse().map_err(|_| Error::parse(format!("bad integer {:?} in host spec", f)))
        };
        let float = |f: &str| -> Result<f64> {
            f.trim().parse().map_err(|_| Error::parse(format!("bad number {:?} in host spec", f)))
        };
        let seed_of = |f: &str| -> Result<u64> {
            let v = f
                .trim()
                .strip_prefix("seed=")
                .ok_or_else(|| Error::parse("random host needs seed=<int>"))?;
            v.parse().map_err(|_| Error::parse(format!("bad seed {:?}", f)))
        };
        match kind {
            "complete" => {
                if fields.len() != 2 {
                    return Err(Error::parse("complete:n,r"));
                }
                Ok(HostSpec::Complete { n: int(fields[0])?, r: int(fields[1])? })
            }
            "sunflower" => {
                if fields.len() != 3 {
                    return Err(Error::parse("sunflower:edges,kernel,r"));
                }
                Ok(HostSpec::Sunflower {
                    edges: int(fields[0])?,
                    kernel: int(fields[1])?,
                    r: int(fields[2])?,
                })
            }
            "partite" => {
                let sizes = fields.iter().map(|f| int(f)).collect::<Result<Vec<_>>>()?;
                Ok(HostSpec::PartiteComplete { sizes })
            }
            "random" | "linear-random" => {
                if fields.len() != 4 {
                    return Err(Error::parse("random:n,r,p,seed=<int>"));
                }
                let n = int(fields[0])?;
                let r = int(fields[1])?;
                let p = float(fields[2])?;
                let seed = seed_of(fields[3])?;
                if kind == "random" {
                    Ok(HostSpec::Random { n, r, p, seed })
                } else {
                    Ok(HostSpec::LinearRandom { n, r, p, seed })
                }
            }
            other => Err(Error::parse(format!("unknown host kind {:?}", other))),
        }
    }
}

impl fmt::Display for HostSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HostSpec::Complete { n, r } => write!(f, "complete:{},{}", n, r),
            HostSpec::Random { n, r, p, seed } => write!(f, "random:{},{},{},seed={}", n, r, p, seed),
            HostSpec::Sunflower { edges, kernel, r } => {
                write!(f, "sunflower:{},{},{}", edges, kernel, r)
            }
            HostSpec::PartiteComplete { sizes } => {
                let s: Vec<String> = sizes.iter().map(|x| x.to_string()).collect();
                write!(f, "partite:{}", s.join(","))
            }
            HostSpec::LinearRandom { n, r, p, seed } => {
                write!(f, "linear-random:{},{},{},seed={}", n, r, p, seed)
            }
        }
    }
}

/// Materializes a host; deterministic per spec (and seed, where present).
pub fn generate(spec: &HostSpec) -> Result<Hypergraph> {
    match spec {
        HostSpec::Complete { n, r } => {
            validate_nr(*n, *r)?;
            check_edge_budget(binomial(*n, *r))?;
            Ok(complete(*n, *r))
        }
        HostSpec::Random { n, r, p, seed } => {
            validate_nr(*n, *r)?;
            validate_prob(*p)?;
            check_edge_budget(binomial(*n, *r))?;
            Ok(random_host(*n, *r, *p, *seed))
        }
        HostSpec::Sunflower { edges, kernel, r } => {
            if *r < 2 || *kernel >= *r || *edges == 0 {
                return Err(Error::invalid("sunflower needs r >= 2, kernel < r, edges >= 1"));
            }
            let n = kernel + edges * (r - kernel);
            if n > MAX_VERTICES {
                return Err(Error::resource("sunflower exceeds vertex budget"));
            }
            Ok(sunflower(*edges, *kernel, *r))
        }
        HostSpec::PartiteComplete { sizes } => {
            if sizes.len() < 2 || sizes.iter().any(|&s| s == 0) {
                return Err(Error::invalid("partite host needs >= 2 nonempty classes"));
            }
            let n: usize = sizes.iter().sum();
            if n > MAX_VERTICES {
                return Err(Error::resource("partite host exceeds vertex budget"));
            }
            check_edge_budget(sizes.iter().map(|&s| s as f64).product::<f64>())?;
            Ok(partite_complete(sizes))
        }
        HostSpec::LinearRandom { n, r, p, seed } => {
            validate_nr(*n, *r)?;
            validate_prob(*p)?;
            check_edge_budget(binomial(*n, *r))?;
            Ok(linear_subgraph(&random_host(*n, *r, *p, *seed)))
        }
    }
}

fn validate_nr(n: usize, r: usize) -> Result<()> {
    if r < 2 {
        return Err(Error::invalid("uniformity must be at least 2"));
    }
    if n > MAX_VERTICES {
        return Err(Error::resource("vertex budget exceeded"));
    }
    Ok(())
}

fn validate_prob(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid("probability must lie in [0,1]"));
    }
    Ok(())
}

fn check_edge_budget(estimate: f64) -> Result<()> {
    if estimate > MAX_GENERATED_EDGES as f64 {
        return Err(Error::resource("edge budget exceeded"));
    }
    Ok(())
}

fn binomial(n: usize, r: usize) -> f64 {
    if r > n {
        return 0.0;
    }
    let mut acc = 1.0f64;
    for i in 0..r {
        acc *= (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// The complete r-graph on `n` vertices.
pub fn complete(n: usize, r: usize) -> Hypergraph {
    let mut edges = Vec::new();
    for_each_subset_colex(n, r, |s| edges.push(s.to_vec()));
    Hypergraph::new(r, n, edges).expect("complete host is well formed")
}

/// Binomial random r-graph: each r-subset kept independently with
/// probability `p`, drawn in colex order from the seed's stream.
pub fn random_host(n: usize, r: usize, p: f64, seed: u64) -> Hypergraph {
    let mut rng = stream(seed, 0, Stage::Generate);
    let mut edges = Vec::new();
    for_each_subset_colex(n, r, |s| {
        if rng.gen::<f64>() < p {
            edges.push(s.to_vec());
        }
    });
    Hypergraph::new(r, n, edges).expect("random host is well formed")
}

/// Sunflower with `edges` petals and a fixed kernel `{0..kernel}`.
pub fn sunflower(edges: usize, kernel: usize, r: usize) -> Hypergraph {
    let petal = r - kernel;
    let n = kernel + edges * petal;
    let mut list = Vec::with_capacity(edges);
    for i in 0..edges {
        let mut e: Vec<usize> = (0..kernel).collect();
        e.extend(kernel + i * petal..kernel + (i + 1) * petal);
        list.push(e);
    }
    Hypergraph::new(r, n, list).expect("sunflower is well formed")
}

/// Complete r-partite r-graph with the given class sizes.
pub fn partite_complete(sizes: &[usize]) -> Hypergraph {
    let r = sizes.len();
    let n: usize = sizes.iter().sum();
    let mut offsets = Vec::with_capacity(r);
    let mut acc = 0;
    for &s in sizes {
        offsets.push(acc);
        acc += s;
    }
    let mut edges = Vec::new();
    let mut choice = vec![0usize; r];
    loop {
        edges.push((0..r).map(|i| offsets[i] + choice[i]).collect::<Vec<_>>());
        let mut i = r;
        loop {
            if i == 0 {
                let h = Hypergraph::new(r, n, edges).expect("partite host is well formed");
                return h;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < sizes[i] {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// The loose cycle with `ell` edges: consecutive edges share exactly one
/// vertex, all other pairs are disjoint.
pub fn loose_cycle(ell: usize, r: usize) -> Hypergraph {
    assert!(ell >= 3 && r >= 2);
    // vertices: links 0..ell, then r-2 interior vertices per edge
    let interior = r - 2;
    let n = ell + ell * interior;
    let mut edges = Vec::with_capacity(ell);
    for i in 0..ell {
        let mut e = vec![i, (i + 1) % ell];
        e.extend(ell + i * interior..ell + (i + 1) * interior);
        edges.push(e);
    }
    Hypergraph::new(r, n, edges).expect("loose cycle is well formed")
}

/// The Fano plane, the unique 7-point Steiner triple system.
pub fn fano() -> Hypergraph {
    Hypergraph::new(
        3,
        7,
        vec![
            vec![0, 1, 2],
            vec![0, 3, 4],
            vec![0, 5, 6],
            vec![1, 3, 5],
            vec![1, 4, 6],
            vec![2, 3, 6],
            vec![2, 4, 5],
        ],
    )
    .expect("fano is well formed")
}

/// Theorems whose upper-bound host families are generated by
/// [`tightness_host`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TightnessFamily {
    /// Clique sized so that the maximum degree is about `delta`.
    BergeClique { r: usize },
    /// Binomial random 3-graph at `p = 1/n` with `n = delta`.
    LooseRandom,
    /// Linear subgraph of a binomial random r-graph at `p = n^{2-r}`.
    LooseLinearRandom { r: usize },
}

/// Host family certifying tightness for each bound, sized so that the
/// maximum degree is roughly `delta`.
pub fn tightness_host(family: TightnessFamily, delta: usize, seed: u64) -> Result<HostSpec> {
    match family {
        TightnessFamily::BergeClique { r } => {
            if r < 2 {
                return Err(Error::invalid("uniformity must be at least 2"));
            }
            let n = (delta as f64).powf(1.0 / (r - 1) as f64).ceil() as usize;
            if n < r {
                return Err(Error::invalid("delta too small for a clique host"));
            }
            Ok(HostSpec::Complete { n, r })
        }
        TightnessFamily::LooseRandom => {
            let n = delta;
            if n < 3 {
                return Err(Error::invalid("delta too small for a random host"));
            }
            Ok(HostSpec::Random { n, r: 3, p: 1.0 / n as f64, seed })
        }
        TightnessFamily::LooseLinearRandom { r } => {
            if r < 3 {
                return Err(Error::invalid("linear random host needs r >= 3"));
            }
            let n = delta;
            if n < r {
                return Err(Error::invalid("delta too small"));
            }
            let p = (n as f64).powi(2 - r as i32);
            Ok(HostSpec::LinearRandom { n, r, p, seed })
        }
    }
}
