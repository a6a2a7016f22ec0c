use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::{Array1, Array2, Axis};

use crate::error::{invalid, shape, Result};
use crate::model::EmbeddingMatrix;

/// Principal component projection fitted on mean-centered data.
///
/// Components are sorted by decreasing variance and oriented so that the
/// loading with the largest magnitude is positive.
#[derive(Debug, Clone)]
pub struct Pca {
    pub mean: Array1<f64>,
    /// `d × dim`, one component per row.
    pub components: Array2<f64>,
    pub explained_variance: Array1<f64>,
    pub total_variance: f64,
}

impl Pca {
    pub fn fit(x: &EmbeddingMatrix, n_components: usize) -> Result<Self> {
        let dim = x.dim();
        if n_components > dim {
            return Err(invalid(format!(
                "cannot keep {n_components} components of {dim}-dimensional data"
            )));
        }
        if x.rows() == 0 {
            return Err(invalid("PCA needs at least one row"));
        }
        let data = x.view();
        let mean = data.mean_axis(Axis(0)).expect("rows > 0");
        let centered = &data - &mean;
        let denom = (x.rows().max(2) - 1) as f64;
        let cov = centered.t().dot(&centered) / denom;

        let cov = DMatrix::from_fn(dim, dim, |i, j| 0.5 * (cov[[i, j]] + cov[[j, i]]));
        let eig = SymmetricEigen::new(cov);
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[b]
                .total_cmp(&eig.eigenvalues[a])
                .then(a.cmp(&b))
        });

        let mut components = Array2::zeros((n_components, dim));
        let mut explained = Array1::zeros(n_components);
        for (slot, &idx) in order.iter().take(n_components).enumerate() {
            let v = eig.eigenvectors.column(idx);
            let mut lead = 0;
            for j in 0..dim {
                if v[j].abs() > v[lead].abs() {
                    lead = j;
                }
            }
            let sign = if v[lead] < 0.0 { -1.0 } else { 1.0 };
            for j in 0..dim {
                components[[slot, j]] = sign * v[j];
            }
            explained[slot] = eig.eigenvalues[idx].max(0.0);
        }
        let total_variance = eig.eigenvalues.iter().map(|v| v.max(0.0)).sum();

        Ok(Self {
            mean,
            components,
            explained_variance: explained,
            total_variance,
        })
    }

    pub fn n_components(&self) -> usize {
        self.components.nrows()
    }

    pub fn transform(&self, x: &EmbeddingMatrix) -> Result<EmbeddingMatrix> {
        if x.dim() != self.mean.len() {
            return Err(shape(format!(
                "PCA fitted on dim {}, got dim {}",
                self.mean.len(),
                x.dim()
            )));
        }
        let centered = &x.view() - &self.mean;
        EmbeddingMatrix::new(centered.dot(&self.components.t()))
    }

    /// Maps projected rows back to the original space (centered data plus mean).
    pub fn inverse_transform(&self, y: &EmbeddingMatrix) -> Result<Array2<f64>> {
        if y.dim() != self.n_components() {
            return Err(shape("projected dim does not match component count"));
        }
        Ok(y.view().dot(&self.components) + &self.mean)
    }

    pub fn explained_variance_ratio(&self) -> Array1<f64> {
        if self.total_variance == 0.0 {
            return Array1::zeros(self.n_components());
        }
        &self.explained_variance / self.total_variance
    }
}

/// Projects `x` onto its top `d` principal components.
pub fn pca(x: &EmbeddingMatrix, d: usize) -> Result<EmbeddingMatrix> {
    Pca::fit(x, d)?.transform(x)
}
