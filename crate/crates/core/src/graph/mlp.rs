use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand_distr::{Distribution, Normal};

use super::softmax::{row_softmax, softmax_backward};
use crate::rng::Rng;

/// Default width of the hidden layer.
pub const DEFAULT_HIDDEN_DIM: usize = 64;

/// One ReLU hidden layer followed by a softmax classifier; maps embeddings to
/// row-stochastic cluster memberships.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpTransform {
    pub w1: Array2<f64>,
    pub b1: Array1<f64>,
    pub w2: Array2<f64>,
    pub b2: Array1<f64>,
}

pub(crate) struct ForwardCache {
    pre: Array2<f64>,
    hidden: Array2<f64>,
    pub(crate) out: Array2<f64>,
}

impl MlpTransform {
    /// He-style Gaussian weights, zero biases.
    pub fn random(input_dim: usize, hidden_dim: usize, output_dim: usize, rng: &mut Rng) -> Self {
        let mut draw = |rows: usize, cols: usize, fan_in: usize| {
            let normal = Normal::new(0.0, (2.0 / fan_in.max(1) as f64).sqrt()).expect("finite std");
            Array2::from_shape_simple_fn((rows, cols), || normal.sample(rng))
        };
        let w1 = draw(input_dim, hidden_dim, input_dim);
        let w2 = draw(hidden_dim, output_dim, hidden_dim);
        Self {
            w1,
            b1: Array1::zeros(hidden_dim),
            w2,
            b2: Array1::zeros(output_dim),
        }
    }

    pub fn zeros(input_dim: usize, hidden_dim: usize, output_dim: usize) -> Self {
        Self {
            w1: Array2::zeros((input_dim, hidden_dim)),
            b1: Array1::zeros(hidden_dim),
            w2: Array2::zeros((hidden_dim, output_dim)),
            b2: Array1::zeros(output_dim),
        }
    }

    pub fn input_dim(&self) -> usize {
        self.w1.nrows()
    }

    pub fn hidden_dim(&self) -> usize {
        self.w1.ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.w2.ncols()
    }

    pub fn n_params(&self) -> usize {
        self.w1.len() + self.b1.len() + self.w2.len() + self.b2.len()
    }

    pub fn forward(&self, x: ArrayView2<'_, f64>) -> Array2<f64> {
        self.forward_cached(x).out
    }

    pub(crate) fn forward_cached(&self, x: ArrayView2<'_, f64>) -> ForwardCache {
        let pre = x.dot(&self.w1) + &self.b1;
        let hidden = pre.mapv(|v| v.max(0.0));
        let logits = hidden.dot(&self.w2) + &self.b2;
        let out = row_softmax(logits.view());
        ForwardCache { pre, hidden, out }
    }

    /// Parameter gradient given the gradient with respect to the output memberships.
    pub(crate) fn backward(
        &self,
        x: ArrayView2<'_, f64>,
        cache: &ForwardCache,
        grad_out: ArrayView2<'_, f64>,
    ) -> MlpTransform {
        let dz = softmax_backward(cache.out.view(), grad_out);
        let w2 = cache.hidden.t().dot(&dz);
        let b2 = dz.sum_axis(Axis(0));
        let mut dh = dz.dot(&self.w2.t());
        dh.zip_mut_with(&cache.pre, |g, &p| {
            if p <= 0.0 {
                *g = 0.0;
            }
        });
        let w1 = x.t().dot(&dh);
        let b1 = dh.sum_axis(Axis(0));
        MlpTransform { w1, b1, w2, b2 }
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.n_params());
        v.extend(self.w1.iter());
        v.extend(self.b1.iter());
        v.extend(self.w2.iter());
        v.extend(self.b2.iter());
        v
    }

    /// Overwrites the parameters from a flat slice in `to_flat` order.
    pub fn load_flat(&mut self, flat: &[f64]) {
        assert_eq!(flat.len(), self.n_params(), "flat parameter length");
        let mut it = flat.iter().copied();
        for slot in self
            .w1
            .iter_mut()
            .chain(self.b1.iter_mut())
            .chain(self.w2.iter_mut())
            .chain(self.b2.iter_mut())
        {
            *slot = it.next().expect("length checked");
        }
    }
}
