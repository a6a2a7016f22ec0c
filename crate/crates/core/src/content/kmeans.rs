use ndarray::{Array2, ArrayView1, ArrayView2};
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::model::{ClusterMatrix, EmbeddingMatrix};
use crate::rng::substream;

/// Lloyd's k-means with farthest-point seeding.
#[derive(Debug, Clone)]
pub struct KMeans {
    pub n_clusters: usize,
    pub seed: u64,
    pub max_iters: usize,
}

#[derive(Debug, Clone)]
pub struct KMeansFit {
    pub memberships: ClusterMatrix,
    pub labels: Vec<usize>,
    pub centroids: Array2<f64>,
    /// Sum of squared distances to the assigned centroid, one entry per assignment pass.
    pub objective_trace: Vec<f64>,
    pub converged: bool,
}

impl KMeans {
    pub fn new(n_clusters: usize, seed: u64) -> Self {
        Self {
            n_clusters,
            seed,
            max_iters: 300,
        }
    }

    pub fn fit(&self, x: &EmbeddingMatrix) -> Result<KMeansFit> {
        let k = self.n_clusters;
        let n = x.rows();
        if k == 0 || k > n {
            return Err(Error::InsufficientItems {
                items: n,
                clusters: k,
            });
        }
        let data = x.view();
        let mut centroids = self.seed_centroids(data);
        let mut labels: Vec<usize> = Vec::new();
        let mut trace = Vec::new();
        let mut converged = false;

        for _ in 0..self.max_iters.max(1) {
            let (next, objective) = assign(data, centroids.view());
            trace.push(objective);
            if next == labels {
                converged = true;
                break;
            }
            labels = next;
            update_centroids(data, &labels, &mut centroids);
        }

        Ok(KMeansFit {
            memberships: ClusterMatrix::from_labels(&labels, k)?,
            labels,
            centroids,
            objective_trace: trace,
            converged,
        })
    }

    /// First centroid drawn from the seeded stream, the rest greedily as the
    /// point farthest from all chosen centroids (lowest index on ties).
    fn seed_centroids(&self, data: ArrayView2<'_, f64>) -> Array2<f64> {
        let n = data.nrows();
        let mut rng = substream(self.seed, "kmeans/init");
        let mut chosen = vec![rng.random_range(0..n)];
        let mut nearest: Vec<f64> = (0..n)
            .map(|i| sq_dist(data.row(i), data.row(chosen[0])))
            .collect();
        while chosen.len() < self.n_clusters {
            let mut best = None;
            for (i, &d) in nearest.iter().enumerate() {
                if chosen.contains(&i) {
                    continue;
                }
                match best {
                    Some((_, bd)) if d <= bd => {}
                    _ => best = Some((i, d)),
                }
            }
            let (next, _) = best.expect("k <= n leaves an unchosen point");
            chosen.push(next);
            for (i, slot) in nearest.iter_mut().enumerate() {
                *slot = slot.min(sq_dist(data.row(i), data.row(next)));
            }
        }
        let mut centroids = Array2::zeros((self.n_clusters, data.ncols()));
        for (c, &i) in chosen.iter().enumerate() {
            centroids.row_mut(c).assign(&data.row(i));
        }
        centroids
    }
}

/// Hard k-means clustering with the default iteration budget.
pub fn kmeans(x: &EmbeddingMatrix, n_clusters: usize, seed: u64) -> Result<ClusterMatrix> {
    Ok(KMeans::new(n_clusters, seed).fit(x)?.memberships)
}

pub(crate) fn sq_dist(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn assign(data: ArrayView2<'_, f64>, centroids: ArrayView2<'_, f64>) -> (Vec<usize>, f64) {
    let mut objective = 0.0;
    let labels = data
        .outer_iter()
        .map(|row| {
            let mut best = (0, f64::INFINITY);
            for (c, centroid) in centroids.outer_iter().enumerate() {
                let d = sq_dist(row, centroid);
                if d < best.1 {
                    best = (c, d);
                }
            }
            objective += best.1;
            best.0
        })
        .collect();
    (labels, objective)
}

/// Means of assigned points; an empty cluster keeps its previous centroid.
fn update_centroids(data: ArrayView2<'_, f64>, labels: &[usize], centroids: &mut Array2<f64>) {
    let mut sums = Array2::<f64>::zeros(centroids.raw_dim());
    let mut counts = vec![0usize; centroids.nrows()];
    for (row, &l) in data.outer_iter().zip(labels) {
        let mut s = sums.row_mut(l);
        s += &row;
        counts[l] += 1;
    }
    for (c, &count) in counts.iter().enumerate() {
        if count > 0 {
            let mean = &sums.row(c) / count as f64;
            centroids.row_mut(c).assign(&mean);
        }
    }
}
