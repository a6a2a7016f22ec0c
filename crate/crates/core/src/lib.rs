//! Joint clustering of scientific claims and the papers they cite, cluster
//! quality metrics, and claim ranking over knowledge graphs.

pub mod content;
pub mod contextualize;
pub mod error;
pub mod extract;
pub mod graph;
pub mod hybrid;
pub mod io;
pub mod metrics;
pub mod model;
pub mod optim;
pub mod pipeline;
pub mod records;
pub mod rng;
pub mod similarity;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use model::{
    frobenius_norm, hard_assign, ClusterKind, ClusterMatrix, EmbeddingMatrix, LinkMatrix, RunConfig,
};
