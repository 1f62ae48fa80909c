//! Certified construction of cycle-free subgraphs of uniform hypergraphs.
//!
//! The crate has five layers:
//!
//! - [`hypergraph`] / [`reductions`] / [`io`]: the r-uniform hypergraph
//!   carrier, degree machinery, partitions, projections, matchings, and the
//!   `.hg` text format;
//! - [`families`]: decidable detectors (with witnesses) for Berge cycles,
//!   loose cycles, sunflower variants, a fixed four-edge 3-graph pattern,
//!   local isomorphisms, and matching-prefix projections;
//! - [`oracle`]: exact maximum family-free subgraphs at desk scale by
//!   branch and bound, with a persistent result cache;
//! - [`extract`]: seeded randomized extraction routines and the full
//!   theorem-level pipelines, each emitting a verified report;
//! - [`hosts`] / [`harness`]: reproducible host generators and the batch
//!   experiment runner with exponent fits.

pub mod error;
pub mod extract;
pub mod families;
pub mod harness;
pub mod hosts;
pub mod hypergraph;
pub mod io;
pub mod oracle;
pub mod reductions;
pub mod rng;

pub use error::{Error, Result};
pub use hypergraph::{DegreeProfile, Hypergraph, Matching, Partition};
