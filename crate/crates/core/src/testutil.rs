use ndarray::Array2;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use crate::graph::random_memberships;
use crate::model::{ClusterMatrix, EmbeddingMatrix, LinkMatrix};
use crate::optim::Objective;
use crate::rng::substream;

/// Gaussian blobs; blob `i` has `count` points around `offset · 1`.
pub fn blobs(spec: &[(f64, usize)], dim: usize, std: f64, seed: u64) -> EmbeddingMatrix {
    let mut rng = substream(seed, "test/blobs");
    let n: usize = spec.iter().map(|s| s.1).sum();
    let mut x = Array2::zeros((n, dim));
    let mut i = 0;
    for &(offset, count) in spec {
        for _ in 0..count {
            for j in 0..dim {
                let z: f64 = StandardNormal.sample(&mut rng);
                x[[i, j]] = offset + std * z;
            }
            i += 1;
        }
    }
    EmbeddingMatrix::new(x).unwrap()
}

pub fn random_matrix(rows: usize, dim: usize, seed: u64) -> Array2<f64> {
    let mut rng = substream(seed, "test/matrix");
    Array2::from_shape_simple_fn((rows, dim), || StandardNormal.sample(&mut rng))
}

pub fn random_links(rows: usize, cols: usize, density: f64, seed: u64) -> LinkMatrix {
    let mut rng = substream(seed, "test/links");
    let l = Array2::from_shape_simple_fn((rows, cols), || {
        if rng.random_bool(density) {
            1.0
        } else {
            0.0
        }
    });
    LinkMatrix::new(l).unwrap()
}

pub fn random_soft(rows: usize, k: usize, seed: u64) -> ClusterMatrix {
    random_memberships(rows, k, seed, "test/soft")
}

/// Relative error between the analytic gradient and central differences.
pub fn fd_check(obj: &impl Objective, x: &[f64]) -> f64 {
    let h = 1e-5;
    let (_, ga) = obj.value_and_gradient(x);
    let mut probe = x.to_vec();
    let gfd: Vec<f64> = (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let up = obj.value(&probe);
            probe[i] = x[i] - h;
            let down = obj.value(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect();
    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let diff: Vec<f64> = ga.iter().zip(&gfd).map(|(a, b)| a - b).collect();
    let scale = norm(&ga).max(norm(&gfd));
    if scale == 0.0 {
        0.0
    } else {
        norm(&diff) / scale
    }
}

pub fn random_embeddings(rows: usize, dim: usize, seed: u64) -> EmbeddingMatrix {
    EmbeddingMatrix::new(random_matrix(rows, dim, seed)).unwrap()
}
