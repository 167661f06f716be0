//! Canonical labeling and isomorphism testing for random uniform hypergraphs.
//!
//! - [`hypercore`]: simple and multi k-uniform hypergraphs, links, BFS layers.
//! - [`randmodels`]: binomial and configuration-model generators.
//! - [`canon`]: colour refinement for graphs, recursive link certificates for k >= 3.
//! - [`regcanon`]: distance-profile labeling of regular instances.
//! - [`oracle`]: exhaustive checks and the exact occupancy law.
//! - [`workbench`]: reproducible parallel experiments.

pub mod canon;
pub mod format;
pub mod hypercore;
pub mod oracle;
pub mod randmodels;
pub mod regcanon;
pub mod rng;
pub mod workbench;

pub use canon::{canonical_labeling, certificate, iso_test, Certificate, IsoVerdict, LabelingOutcome};
pub use hypercore::{HyperEdges, Hypergraph, HypergraphError, MultiHypergraph};
pub use randmodels::{gen_binomial, gen_configuration, gen_regular_simple, GeneratorParams};
pub use regcanon::{regular_canonical_labeling, RegularParams};
