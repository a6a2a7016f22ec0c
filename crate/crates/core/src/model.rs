//! Numerical types shared across the crate.
//!
//! Every type validates its invariants on construction and is immutable
//! afterwards, so downstream code can rely on them without re-checking.

use ndarray::{Array2, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, shape, Result};

/// Tolerance on row sums of a [`ClusterMatrix`].
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// Default embedding dimension of the reference models.
pub const DEFAULT_DIM: usize = 300;

/// Dense embeddings, one row per claim or paper.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    data: Array2<f64>,
}

impl EmbeddingMatrix {
    pub fn new(data: Array2<f64>) -> Result<Self> {
        if let Some((idx, _)) = data.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(invalid(format!("non-finite embedding entry at {idx:?}")));
        }
        Ok(Self { data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != dim) {
            return Err(shape("embedding rows have differing lengths"));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        let data =
            Array2::from_shape_vec((rows.len(), dim), flat).map_err(|e| shape(e.to_string()))?;
        Self::new(data)
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn dim(&self) -> usize {
        self.data.ncols()
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.data.row(i)
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.data.view()
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.data
    }

    /// Row-wise concatenation `[self; other]`.
    pub fn vstack(&self, other: &EmbeddingMatrix) -> Result<EmbeddingMatrix> {
        if self.dim() != other.dim() {
            return Err(shape(format!(
                "embedding dims differ: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        let data = ndarray::concatenate(Axis(0), &[self.data.view(), other.data.view()])
            .map_err(|e| shape(e.to_string()))?;
        Ok(Self { data })
    }
}

/// Binary claims × papers interconnection matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkMatrix {
    data: Array2<f64>,
}

impl LinkMatrix {
    pub fn new(data: Array2<f64>) -> Result<Self> {
        if let Some((idx, v)) = data.indexed_iter().find(|(_, &v)| v != 0.0 && v != 1.0) {
            return Err(invalid(format!("link entry {v} at {idx:?} is not binary")));
        }
        Ok(Self { data })
    }

    /// Builds a matrix from `(claim, paper)` index pairs. Duplicate pairs collapse.
    pub fn from_pairs(n_claims: usize, n_papers: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut data = Array2::zeros((n_claims, n_papers));
        for &(c, p) in pairs {
            if c >= n_claims || p >= n_papers {
                return Err(shape(format!(
                    "link ({c}, {p}) outside {n_claims}x{n_papers}"
                )));
            }
            data[[c, p]] = 1.0;
        }
        Ok(Self { data })
    }

    pub fn n_claims(&self) -> usize {
        self.data.nrows()
    }

    pub fn n_papers(&self) -> usize {
        self.data.ncols()
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.data.view()
    }

    pub fn transpose(&self) -> LinkMatrix {
        LinkMatrix {
            data: self.data.t().to_owned(),
        }
    }

    pub fn is_linked(&self, claim: usize, paper: usize) -> bool {
        self.data[[claim, paper]] == 1.0
    }

    pub fn n_links(&self) -> usize {
        self.data.iter().filter(|&&v| v == 1.0).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusterKind {
    Soft,
    Hard,
}

/// Row-stochastic membership matrix, items × clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterMatrix {
    data: Array2<f64>,
    kind: ClusterKind,
}

impl ClusterMatrix {
    pub fn new(data: Array2<f64>, kind: ClusterKind) -> Result<Self> {
        if data.ncols() == 0 {
            return Err(invalid("cluster matrix needs at least one cluster"));
        }
        for (i, row) in data.outer_iter().enumerate() {
            if row.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
                return Err(invalid(format!("row {i} has entries outside [0, 1]")));
            }
            let sum: f64 = row.sum();
            if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(invalid(format!("row {i} sums to {sum}, expected 1")));
            }
            if kind == ClusterKind::Hard
                && (row.iter().filter(|&&v| v != 0.0).count() != 1
                    || !row.iter().any(|&v| v == 1.0))
            {
                return Err(invalid(format!("row {i} is not one-hot")));
            }
        }
        Ok(Self { data, kind })
    }

    pub fn soft(data: Array2<f64>) -> Result<Self> {
        Self::new(data, ClusterKind::Soft)
    }

    pub fn hard(data: Array2<f64>) -> Result<Self> {
        Self::new(data, ClusterKind::Hard)
    }

    /// Classifies the matrix as hard when every row is one-hot, soft otherwise.
    pub fn infer(data: Array2<f64>) -> Result<Self> {
        let one_hot = data.outer_iter().all(|row| {
            row.iter().filter(|&&v| v != 0.0).count() == 1 && row.iter().any(|&v| v == 1.0)
        });
        let kind = if one_hot && data.nrows() > 0 {
            ClusterKind::Hard
        } else {
            ClusterKind::Soft
        };
        Self::new(data, kind)
    }

    /// One-hot matrix from cluster labels.
    pub fn from_labels(labels: &[usize], n_clusters: usize) -> Result<Self> {
        let mut data = Array2::zeros((labels.len(), n_clusters));
        for (i, &l) in labels.iter().enumerate() {
            if l >= n_clusters {
                return Err(invalid(format!("label {l} >= {n_clusters} clusters")));
            }
            data[[i, l]] = 1.0;
        }
        Self::hard(data)
    }

    pub fn uniform(rows: usize, n_clusters: usize) -> Self {
        Self {
            data: Array2::from_elem((rows, n_clusters), 1.0 / n_clusters as f64),
            kind: ClusterKind::Soft,
        }
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn n_clusters(&self) -> usize {
        self.data.ncols()
    }

    pub fn kind(&self) -> ClusterKind {
        self.kind
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.data.view()
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.data.row(i)
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.data
    }

    pub fn hard_assign(&self) -> Vec<usize> {
        hard_assign(self)
    }

    /// Splits rows `[0, at)` and `[at, rows)` into two matrices of the same kind.
    pub fn split_rows(&self, at: usize) -> (ClusterMatrix, ClusterMatrix) {
        let top = self.data.slice(ndarray::s![..at, ..]).to_owned();
        let bottom = self.data.slice(ndarray::s![at.., ..]).to_owned();
        (
            ClusterMatrix {
                data: top,
                kind: self.kind,
            },
            ClusterMatrix {
                data: bottom,
                kind: self.kind,
            },
        )
    }
}

/// Row-wise argmax; ties go to the lowest column index.
pub fn hard_assign(m: &ClusterMatrix) -> Vec<usize> {
    m.data.outer_iter().map(|row| argmax(row)).collect()
}

pub(crate) fn argmax(row: ArrayView1<'_, f64>) -> usize {
    let mut best = 0;
    for (j, &v) in row.iter().enumerate() {
        if v > row[best] {
            best = j;
        }
    }
    best
}

pub fn frobenius_norm(m: ArrayView2<'_, f64>) -> f64 {
    m.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Hyper-parameters of a clustering run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub n_clusters: usize,
    /// Weight of the anti-uniformity regularizer.
    pub beta: f64,
    /// Graph vs. content trade-off of alternate optimization.
    pub gamma: f64,
    /// Popularity vs. reputation trade-off of edge weights.
    pub theta: f64,
    pub seed: u64,
    pub max_iters: usize,
    pub step_size: f64,
    pub tolerance: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_clusters: 10,
            beta: 0.3,
            gamma: 0.5,
            theta: 0.4,
            seed: 0,
            max_iters: 5000,
            step_size: 1.0,
            tolerance: 1e-6,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_clusters < 1 {
            return Err(invalid("n_clusters must be >= 1"));
        }
        if self.beta.is_nan() || self.beta < 0.0 {
            return Err(invalid(format!("beta must be >= 0, got {}", self.beta)));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(invalid(format!(
                "gamma must lie in [0, 1], got {}",
                self.gamma
            )));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(invalid(format!(
                "theta must lie in [0, 1], got {}",
                self.theta
            )));
        }
        if !self.step_size.is_finite() || self.step_size <= 0.0 {
            return Err(invalid("step_size must be positive"));
        }
        Ok(())
    }
}
