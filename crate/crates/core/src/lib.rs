//! Node centrality, global topology and null-model analysis for undirected
//! networks.
//!
//! The crate is organised around an immutable [`Graph`]:
//!
//! - [`graph`]: ingestion, preprocessing and threshold-graph machinery
//! - [`centrality`]: seventeen node centrality measures
//! - [`community`]: Louvain modularity optimisation and consensus clustering
//! - [`topology`]: global descriptors (density, assortativity, spectral gap, ...)
//! - [`surrogate`]: connected random and degree-preserving null models
//! - [`cmc`]: Spearman correlations between measures and their aggregates
//! - [`profiling`]: rank profiles, Ward clustering and force-directed layout

pub mod centrality;
pub mod cmc;
pub mod community;
mod error;
pub mod graph;
pub(crate) mod linalg;
pub mod profiling;
pub mod seed;
pub mod surrogate;
pub mod topology;

pub use error::{Error, Result};
pub use graph::Graph;
