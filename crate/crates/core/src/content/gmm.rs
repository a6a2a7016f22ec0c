use ndarray::{Array1, Array2, ArrayView2, Axis};

use crate::content::kmeans::KMeans;
use crate::error::{Error, Result};
use crate::model::{ClusterMatrix, EmbeddingMatrix};

/// Lower bound on every per-dimension variance.
pub const VARIANCE_FLOOR: f64 = 1e-6;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Gaussian mixture with diagonal covariances, fitted by EM and initialized
/// from a k-means run with the same seed.
#[derive(Debug, Clone)]
pub struct Gmm {
    pub n_clusters: usize,
    pub seed: u64,
    pub max_iters: usize,
    /// Stop once the mean per-item log-likelihood moves less than this.
    pub tolerance: f64,
}

#[derive(Debug, Clone)]
pub struct GmmFit {
    pub responsibilities: ClusterMatrix,
    pub weights: Array1<f64>,
    pub means: Array2<f64>,
    pub variances: Array2<f64>,
    /// Total log-likelihood evaluated before each M-step.
    pub log_likelihood_trace: Vec<f64>,
    pub converged: bool,
}

struct Params {
    weights: Array1<f64>,
    means: Array2<f64>,
    variances: Array2<f64>,
}

impl Gmm {
    pub fn new(n_clusters: usize, seed: u64) -> Self {
        Self {
            n_clusters,
            seed,
            max_iters: 200,
            tolerance: 1e-6,
        }
    }

    pub fn fit(&self, x: &EmbeddingMatrix) -> Result<GmmFit> {
        let n = x.rows();
        if self.n_clusters == 0 || self.n_clusters > n {
            return Err(Error::InsufficientItems {
                items: n,
                clusters: self.n_clusters,
            });
        }
        let data = x.view();
        let init = KMeans::new(self.n_clusters, self.seed).fit(x)?;
        let mut params = m_step(data, init.memberships.view());

        let mut trace = Vec::new();
        let mut converged = false;
        let mut resp;
        let mut iter = 0;
        loop {
            let (r, ll) = e_step(data, &params);
            resp = r;
            let prev = trace.last().copied();
            trace.push(ll);
            if let Some(prev) = prev {
                if ((ll - prev) / n as f64).abs() < self.tolerance {
                    converged = true;
                    break;
                }
            }
            iter += 1;
            if iter > self.max_iters {
                break;
            }
            params = m_step(data, resp.view());
        }

        Ok(GmmFit {
            responsibilities: ClusterMatrix::soft(resp)?,
            weights: params.weights,
            means: params.means,
            variances: params.variances,
            log_likelihood_trace: trace,
            converged,
        })
    }
}

/// Soft clustering by posterior responsibilities.
pub fn gmm(x: &EmbeddingMatrix, n_clusters: usize, seed: u64) -> Result<ClusterMatrix> {
    Ok(Gmm::new(n_clusters, seed).fit(x)?.responsibilities)
}

fn m_step(data: ArrayView2<'_, f64>, resp: ArrayView2<'_, f64>) -> Params {
    let (n, dim) = data.dim();
    let k = resp.ncols();
    let global_mean = data.mean_axis(Axis(0)).expect("n > 0");
    let global_var = data.var_axis(Axis(0), 0.0).mapv(|v| v.max(VARIANCE_FLOOR));

    let mass = resp.sum_axis(Axis(0));
    let mut weights = Array1::zeros(k);
    let mut means = Array2::zeros((k, dim));
    let mut variances = Array2::zeros((k, dim));
    for c in 0..k {
        let nk = mass[c];
        if nk <= f64::MIN_POSITIVE * n as f64 {
            // an empty component falls back to the data-wide moments
            weights[c] = f64::MIN_POSITIVE;
            means.row_mut(c).assign(&global_mean);
            variances.row_mut(c).assign(&global_var);
            continue;
        }
        weights[c] = nk / n as f64;
        let r = resp.column(c);
        let mut mu = Array1::<f64>::zeros(dim);
        for (row, &w) in data.outer_iter().zip(r.iter()) {
            mu.scaled_add(w, &row);
        }
        mu /= nk;
        let mut var = Array1::<f64>::zeros(dim);
        for (row, &w) in data.outer_iter().zip(r.iter()) {
            let diff = &row - &mu;
            var.scaled_add(w, &(&diff * &diff));
        }
        var /= nk;
        var.mapv_inplace(|v| v.max(VARIANCE_FLOOR));
        means.row_mut(c).assign(&mu);
        variances.row_mut(c).assign(&var);
    }
    Params {
        weights,
        means,
        variances,
    }
}

fn e_step(data: ArrayView2<'_, f64>, params: &Params) -> (Array2<f64>, f64) {
    let k = params.weights.len();
    let log_norm: Vec<f64> = (0..k)
        .map(|c| {
            params.weights[c].ln()
                - 0.5
                    * params
                        .variances
                        .row(c)
                        .iter()
                        .map(|v| LN_2PI + v.ln())
                        .sum::<f64>()
        })
        .collect();

    let mut resp = Array2::zeros((data.nrows(), k));
    let mut total = 0.0;
    let mut logp = vec![0.0; k];
    for (i, row) in data.outer_iter().enumerate() {
        for (c, lp) in logp.iter_mut().enumerate() {
            let mahal: f64 = row
                .iter()
                .zip(params.means.row(c))
                .zip(params.variances.row(c))
                .map(|((x, m), v)| (x - m) * (x - m) / v)
                .sum();
            *lp = log_norm[c] - 0.5 * mahal;
        }
        let max = logp.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + logp.iter().map(|lp| (lp - max).exp()).sum::<f64>().ln();
        total += lse;
        for (c, lp) in logp.iter().enumerate() {
            resp[[i, c]] = (lp - lse).exp().min(1.0);
        }
    }
    (resp, total)
}
