//! topograd: an exact, desk-scale toolkit for shallow-topological-minor
//! density measures on small graphs.
//!
//! The crate computes the depth-k density measures (subgraph, induced,
//! and exact-depth induced variants) with verifying witnesses, finds and
//! re-checks subdivision occurrences, runs the hat-family and
//! branch-fixing searches behind the density pipeline, executes that
//! pipeline with exact per-stage certificates, and evaluates the bound
//! recurrences that characterize bounded expansion and nowhere-dense
//! behavior. All density values are exact rationals and all bound-table
//! entries are arbitrary-precision: nothing is rounded, anywhere.
//!
//! The `oracle` module carries independent brute-force references
//! (subset scans, unpruned embedding enumeration, pattern-by-pattern
//! density) and the small-graph isomorphism-free corpus used by the
//! test suite to cross-check the optimized paths.

#![forbid(unsafe_code)]

pub mod bounds;
pub mod coloring;
pub mod config;
pub mod density;
pub mod error;
pub mod find;
mod flow;
pub mod generate;
pub mod graph;
pub mod hats;
pub mod io;
pub mod mad;
pub mod oracle;
pub mod patterns;
pub mod pipeline;
pub mod witness;

pub use config::Config;
pub use density::{density_profile, family_trend, nabla_exact_k, nabla_induced_k, nabla_k, Measure};
pub use error::{Error, Result};
pub use find::{find_clique_subdivision, find_subdivision};
pub use graph::{BipartiteLayout, Graph, Rational};
pub use mad::max_average_degree;
pub use patterns::{find_biclique_induced, find_biclique_subgraph, find_clique_induced};
pub use pipeline::{run_pipeline, verify_density_jump_inequality, PipelineParams};
pub use witness::{verify_witness, DepthMode, Occurrence, SubdivisionSpec, SubdivisionWitness};
