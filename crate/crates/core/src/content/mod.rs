//! Content-based clustering of claims and papers in their shared embedding space.

mod gmm;
mod kmeans;
mod pca;

pub use gmm::{gmm, Gmm, GmmFit, VARIANCE_FLOOR};
pub use kmeans::{kmeans, KMeans, KMeansFit};
pub use pca::{pca, Pca};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{ClusterMatrix, EmbeddingMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContentAlgorithm {
    Kmeans,
    Gmm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContentModelChoice {
    pub algorithm: ContentAlgorithm,
    pub use_pca: bool,
    pub pca_dims: usize,
}

impl ContentModelChoice {
    pub fn plain(algorithm: ContentAlgorithm) -> Self {
        Self {
            algorithm,
            use_pca: false,
            pca_dims: 0,
        }
    }

    pub fn with_pca(algorithm: ContentAlgorithm, pca_dims: usize) -> Self {
        Self {
            algorithm,
            use_pca: true,
            pca_dims,
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.use_pca && (self.pca_dims == 0 || self.pca_dims >= dim) {
            return Err(invalid(format!(
                "pca_dims must lie in [1, {dim}), got {}",
                self.pca_dims
            )));
        }
        Ok(())
    }
}

/// Fits one model on the stacked claims and papers and splits the memberships
/// back into `(claims, papers)`.
pub fn joint_content_clustering(
    claims: &EmbeddingMatrix,
    papers: &EmbeddingMatrix,
    choice: ContentModelChoice,
    n_clusters: usize,
    seed: u64,
) -> Result<(ClusterMatrix, ClusterMatrix)> {
    let stacked = claims.vstack(papers)?;
    choice.validate(stacked.dim())?;
    let features = if choice.use_pca {
        pca(&stacked, choice.pca_dims)?
    } else {
        stacked
    };
    let memberships = match choice.algorithm {
        ContentAlgorithm::Kmeans => kmeans(&features, n_clusters, seed)?,
        ContentAlgorithm::Gmm => gmm(&features, n_clusters, seed)?,
    };
    Ok(memberships.split_rows(claims.rows()))
}
