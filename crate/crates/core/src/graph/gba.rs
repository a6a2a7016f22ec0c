use ndarray::{Array2, ArrayView2};

use super::loss::{objective_and_gradient, Optimized};
use super::softmax::{logits_from, row_softmax, softmax_backward, to_cluster_matrix};
use crate::error::{invalid, shape, Result};
use crate::model::{ClusterMatrix, LinkMatrix, RunConfig};
use crate::optim::{descend, DescentSettings, Objective};

/// Result of a graph-based fit.
#[derive(Debug, Clone)]
pub struct GraphFit {
    pub claims: ClusterMatrix,
    pub papers: ClusterMatrix,
    /// Regularized objective at the start and after every accepted step.
    pub trace: Vec<f64>,
    pub converged: bool,
}

/// Regularized objective as a function of the logits of the optimized
/// membership matrices, flattened claims-first.
pub struct GbaObjective<'a> {
    links: &'a LinkMatrix,
    optimized: Optimized,
    beta: f64,
    fixed_claims: Option<ArrayView2<'a, f64>>,
    fixed_papers: Option<ArrayView2<'a, f64>>,
    n_clusters: usize,
}

impl<'a> GbaObjective<'a> {
    /// `claims` / `papers` supply the fixed side for the one-sided variants and
    /// are ignored for the side being optimized.
    pub fn new(
        links: &'a LinkMatrix,
        optimized: Optimized,
        beta: f64,
        claims: &'a ClusterMatrix,
        papers: &'a ClusterMatrix,
    ) -> Result<Self> {
        if claims.rows() != links.n_claims()
            || papers.rows() != links.n_papers()
            || claims.n_clusters() != papers.n_clusters()
        {
            return Err(shape(format!(
                "C' is {}x{}, P' is {}x{}, L is {}x{}",
                claims.rows(),
                claims.n_clusters(),
                papers.rows(),
                papers.n_clusters(),
                links.n_claims(),
                links.n_papers()
            )));
        }
        Ok(Self {
            links,
            optimized,
            beta,
            fixed_claims: (!optimized.claims()).then(|| claims.view()),
            fixed_papers: (!optimized.papers()).then(|| papers.view()),
            n_clusters: claims.n_clusters(),
        })
    }

    fn claim_len(&self) -> usize {
        if self.optimized.claims() {
            self.links.n_claims() * self.n_clusters
        } else {
            0
        }
    }

    /// Flat logits of the optimized sides of `(claims, papers)`.
    pub fn pack(&self, claims: &ClusterMatrix, papers: &ClusterMatrix) -> Vec<f64> {
        let mut flat = Vec::with_capacity(self.n_params());
        if self.optimized.claims() {
            flat.extend(logits_from(claims).iter());
        }
        if self.optimized.papers() {
            flat.extend(logits_from(papers).iter());
        }
        flat
    }

    fn memberships(&self, params: &[f64]) -> (Array2<f64>, Array2<f64>) {
        let k = self.n_clusters;
        let (zc, zp) = params.split_at(self.claim_len());
        let claims = match self.fixed_claims {
            Some(c) => c.to_owned(),
            None => {
                let z =
                    ArrayView2::from_shape((self.links.n_claims(), k), zc).expect("packed shape");
                row_softmax(z)
            }
        };
        let papers = match self.fixed_papers {
            Some(p) => p.to_owned(),
            None => {
                let z =
                    ArrayView2::from_shape((self.links.n_papers(), k), zp).expect("packed shape");
                row_softmax(z)
            }
        };
        (claims, papers)
    }

    pub fn unpack(&self, params: &[f64]) -> (ClusterMatrix, ClusterMatrix) {
        let (c, p) = self.memberships(params);
        let wrap = |m: Array2<f64>, fixed: bool| {
            if fixed {
                ClusterMatrix::infer(m).expect("fixed side was a valid cluster matrix")
            } else {
                to_cluster_matrix(m)
            }
        };
        (
            wrap(c, self.fixed_claims.is_some()),
            wrap(p, self.fixed_papers.is_some()),
        )
    }
}

impl Objective for GbaObjective<'_> {
    fn n_params(&self) -> usize {
        let papers = if self.optimized.papers() {
            self.links.n_papers() * self.n_clusters
        } else {
            0
        };
        self.claim_len() + papers
    }

    fn value(&self, params: &[f64]) -> f64 {
        let (c, p) = self.memberships(params);
        objective_and_gradient(c.view(), p.view(), self.links, self.optimized, self.beta).0
    }

    fn value_and_gradient(&self, params: &[f64]) -> (f64, Vec<f64>) {
        let (c, p) = self.memberships(params);
        let (value, gc, gp) =
            objective_and_gradient(c.view(), p.view(), self.links, self.optimized, self.beta);
        let mut grad = Vec::with_capacity(params.len());
        if self.optimized.claims() {
            grad.extend(softmax_backward(c.view(), gc.view()).iter());
        }
        if self.optimized.papers() {
            grad.extend(softmax_backward(p.view(), gp.view()).iter());
        }
        (value, grad)
    }
}

pub(crate) fn settings(cfg: &RunConfig) -> DescentSettings {
    DescentSettings {
        step_size: cfg.step_size,
        max_iters: cfg.max_iters,
        tolerance: cfg.tolerance,
    }
}

/// Graph-based adaptation: gradient descent on the softmax logits of the
/// optimized memberships. For one-sided variants the other initialization is
/// the fixed clustering and is returned unchanged.
pub fn fit_gba(
    optimized: Optimized,
    links: &LinkMatrix,
    claims_init: &ClusterMatrix,
    papers_init: &ClusterMatrix,
    cfg: &RunConfig,
) -> Result<GraphFit> {
    cfg.validate()?;
    if claims_init.n_clusters() != cfg.n_clusters {
        return Err(invalid(format!(
            "initialization has {} clusters, config asks for {}",
            claims_init.n_clusters(),
            cfg.n_clusters
        )));
    }
    let objective = GbaObjective::new(links, optimized, cfg.beta, claims_init, papers_init)?;
    let start = objective.pack(claims_init, papers_init);
    let outcome = descend(&objective, start, settings(cfg));
    let (mut claims, mut papers) = objective.unpack(&outcome.params);
    if !optimized.claims() {
        claims = claims_init.clone();
    }
    if !optimized.papers() {
        papers = papers_init.clone();
    }
    Ok(GraphFit {
        claims,
        papers,
        trace: outcome.trace,
        converged: outcome.converged,
    })
}
