//! Row-wise softmax parameterization of row-stochastic matrices.

use ndarray::{Array2, ArrayView2, Axis};
use rand_distr::{Distribution, StandardNormal};

use crate::model::ClusterMatrix;
use crate::rng::substream;

/// Floor applied before taking logs of memberships.
pub const LOGIT_FLOOR: f64 = 1e-12;

pub fn row_softmax(logits: ArrayView2<'_, f64>) -> Array2<f64> {
    let mut out = logits.to_owned();
    for mut row in out.outer_iter_mut() {
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        row.mapv_inplace(|z| (z - max).exp());
        let sum = row.sum();
        row /= sum;
    }
    out
}

/// Pulls a gradient with respect to `S = softmax(Z)` back to `Z`.
pub fn softmax_backward(s: ArrayView2<'_, f64>, grad_s: ArrayView2<'_, f64>) -> Array2<f64> {
    let inner = (&s * &grad_s).sum_axis(Axis(1)).insert_axis(Axis(1));
    &s * &(&grad_s - &inner)
}

/// `ln(max(m, 1e-12))` entrywise; softmax of the result reproduces `m` up to the floor.
pub fn logits_from(m: &ClusterMatrix) -> Array2<f64> {
    m.view().mapv(|v| v.max(LOGIT_FLOOR).ln())
}

/// Wraps a softmax output as a [`ClusterMatrix`].
pub fn to_cluster_matrix(s: Array2<f64>) -> ClusterMatrix {
    // softmax rows are in [0, 1] and sum to 1 up to rounding
    ClusterMatrix::soft(s).expect("softmax output is row-stochastic")
}

/// Seeded arbitrary soft memberships: softmax of standard normal logits.
pub fn random_memberships(
    rows: usize,
    n_clusters: usize,
    seed: u64,
    stream: &str,
) -> ClusterMatrix {
    let mut rng = substream(seed, stream);
    let logits =
        Array2::from_shape_simple_fn((rows, n_clusters), || StandardNormal.sample(&mut rng));
    to_cluster_matrix(row_softmax(logits.view()))
}
