use ndarray::Array2;

use super::gba::settings;
use super::loss::{objective_and_gradient, Optimized};
use super::mlp::{MlpTransform, DEFAULT_HIDDEN_DIM};
use super::softmax::to_cluster_matrix;
use crate::error::{invalid, shape, Result};
use crate::model::{ClusterMatrix, EmbeddingMatrix, LinkMatrix, RunConfig};
use crate::optim::{descend, Objective};
use crate::rng::substream;

#[derive(Debug, Clone)]
pub struct GbtFit {
    pub claims: ClusterMatrix,
    pub papers: ClusterMatrix,
    pub claims_transform: Option<MlpTransform>,
    pub papers_transform: Option<MlpTransform>,
    pub trace: Vec<f64>,
    pub converged: bool,
}

/// Regularized objective as a function of the transform weights, flattened
/// claims-transform first.
pub struct GbtObjective<'a> {
    claims: &'a EmbeddingMatrix,
    papers: &'a EmbeddingMatrix,
    links: &'a LinkMatrix,
    optimized: Optimized,
    beta: f64,
    fixed_claims: Option<&'a ClusterMatrix>,
    fixed_papers: Option<&'a ClusterMatrix>,
    // shape templates for unflattening
    claims_template: Option<MlpTransform>,
    papers_template: Option<MlpTransform>,
}

impl<'a> GbtObjective<'a> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        optimized: Optimized,
        claims: &'a EmbeddingMatrix,
        papers: &'a EmbeddingMatrix,
        links: &'a LinkMatrix,
        fixed_claims: Option<&'a ClusterMatrix>,
        fixed_papers: Option<&'a ClusterMatrix>,
        claims_transform: Option<&MlpTransform>,
        papers_transform: Option<&MlpTransform>,
        beta: f64,
    ) -> Result<Self> {
        if claims.rows() != links.n_claims() || papers.rows() != links.n_papers() {
            return Err(shape("embedding rows do not match the link matrix"));
        }
        if claims.dim() != papers.dim() {
            return Err(shape("claims and papers embeddings differ in dim"));
        }
        let need = |flag: bool, present: bool, what: &str| -> Result<()> {
            match (flag, present) {
                (true, false) => Err(invalid(format!("variant requires {what}"))),
                (false, true) => Err(invalid(format!("variant does not take {what}"))),
                _ => Ok(()),
            }
        };
        need(
            !optimized.claims(),
            fixed_claims.is_some(),
            "a fixed claims clustering",
        )?;
        need(
            !optimized.papers(),
            fixed_papers.is_some(),
            "a fixed papers clustering",
        )?;
        need(
            optimized.claims(),
            claims_transform.is_some(),
            "a claims transform",
        )?;
        need(
            optimized.papers(),
            papers_transform.is_some(),
            "a papers transform",
        )?;

        let mut k = None;
        for out in fixed_claims
            .map(ClusterMatrix::n_clusters)
            .into_iter()
            .chain(fixed_papers.map(ClusterMatrix::n_clusters))
            .chain(claims_transform.map(MlpTransform::output_dim))
            .chain(papers_transform.map(MlpTransform::output_dim))
        {
            if *k.get_or_insert(out) != out {
                return Err(shape("cluster counts disagree"));
            }
        }
        if let Some(f) = fixed_claims {
            if f.rows() != claims.rows() {
                return Err(shape("fixed claims clustering has wrong row count"));
            }
        }
        if let Some(f) = fixed_papers {
            if f.rows() != papers.rows() {
                return Err(shape("fixed papers clustering has wrong row count"));
            }
        }
        for t in claims_transform.iter().chain(papers_transform.iter()) {
            if t.input_dim() != claims.dim() {
                return Err(shape("transform input dim does not match embeddings"));
            }
        }

        Ok(Self {
            claims,
            papers,
            links,
            optimized,
            beta,
            fixed_claims,
            fixed_papers,
            claims_template: claims_transform.cloned(),
            papers_template: papers_transform.cloned(),
        })
    }

    pub fn pack(&self) -> Vec<f64> {
        let mut flat = Vec::with_capacity(self.n_params());
        for t in self
            .claims_template
            .iter()
            .chain(self.papers_template.iter())
        {
            flat.extend(t.to_flat());
        }
        flat
    }

    pub fn transforms(&self, params: &[f64]) -> (Option<MlpTransform>, Option<MlpTransform>) {
        let split = self
            .claims_template
            .as_ref()
            .map_or(0, MlpTransform::n_params);
        let (a, b) = params.split_at(split);
        let load = |template: &Option<MlpTransform>, flat: &[f64]| {
            template.as_ref().map(|t| {
                let mut t = t.clone();
                t.load_flat(flat);
                t
            })
        };
        (
            load(&self.claims_template, a),
            load(&self.papers_template, b),
        )
    }

    fn evaluate(&self, params: &[f64], with_grad: bool) -> (f64, Vec<f64>) {
        let (fc, fp) = self.transforms(params);
        let claims_cache = fc.as_ref().map(|f| f.forward_cached(self.claims.view()));
        let papers_cache = fp.as_ref().map(|f| f.forward_cached(self.papers.view()));
        let cc: Array2<f64> = match (&claims_cache, self.fixed_claims) {
            (Some(cache), _) => cache.out.clone(),
            (None, Some(fixed)) => fixed.view().to_owned(),
            (None, None) => unreachable!("validated in new"),
        };
        let pp: Array2<f64> = match (&papers_cache, self.fixed_papers) {
            (Some(cache), _) => cache.out.clone(),
            (None, Some(fixed)) => fixed.view().to_owned(),
            (None, None) => unreachable!("validated in new"),
        };
        let (value, gc, gp) =
            objective_and_gradient(cc.view(), pp.view(), self.links, self.optimized, self.beta);
        if !with_grad {
            return (value, Vec::new());
        }
        let mut grad = Vec::with_capacity(params.len());
        if let (Some(f), Some(cache)) = (&fc, &claims_cache) {
            grad.extend(f.backward(self.claims.view(), cache, gc.view()).to_flat());
        }
        if let (Some(f), Some(cache)) = (&fp, &papers_cache) {
            grad.extend(f.backward(self.papers.view(), cache, gp.view()).to_flat());
        }
        (value, grad)
    }
}

impl Objective for GbtObjective<'_> {
    fn n_params(&self) -> usize {
        self.claims_template
            .as_ref()
            .map_or(0, MlpTransform::n_params)
            + self
                .papers_template
                .as_ref()
                .map_or(0, MlpTransform::n_params)
    }

    fn value(&self, params: &[f64]) -> f64 {
        self.evaluate(params, false).0
    }

    fn value_and_gradient(&self, params: &[f64]) -> (f64, Vec<f64>) {
        self.evaluate(params, true)
    }
}

/// Graph-based transformation with freshly initialized transforms drawn from `cfg.seed`.
pub fn fit_gbt(
    optimized: Optimized,
    claims: &EmbeddingMatrix,
    papers: &EmbeddingMatrix,
    links: &LinkMatrix,
    fixed_claims: Option<&ClusterMatrix>,
    fixed_papers: Option<&ClusterMatrix>,
    cfg: &RunConfig,
) -> Result<GbtFit> {
    let init = |flag: bool, stream: &str| {
        flag.then(|| {
            let mut rng = substream(cfg.seed, stream);
            MlpTransform::random(claims.dim(), DEFAULT_HIDDEN_DIM, cfg.n_clusters, &mut rng)
        })
    };
    let fc = init(optimized.claims(), "gbt/claims");
    let fp = init(optimized.papers(), "gbt/papers");
    fit_gbt_from(
        optimized,
        claims,
        papers,
        links,
        fixed_claims,
        fixed_papers,
        fc,
        fp,
        cfg,
    )
}

/// Graph-based transformation starting from the supplied transforms.
#[allow(clippy::too_many_arguments)]
pub fn fit_gbt_from(
    optimized: Optimized,
    claims: &EmbeddingMatrix,
    papers: &EmbeddingMatrix,
    links: &LinkMatrix,
    fixed_claims: Option<&ClusterMatrix>,
    fixed_papers: Option<&ClusterMatrix>,
    claims_transform: Option<MlpTransform>,
    papers_transform: Option<MlpTransform>,
    cfg: &RunConfig,
) -> Result<GbtFit> {
    cfg.validate()?;
    let objective = GbtObjective::new(
        optimized,
        claims,
        papers,
        links,
        fixed_claims,
        fixed_papers,
        claims_transform.as_ref(),
        papers_transform.as_ref(),
        cfg.beta,
    )?;
    let outcome = descend(&objective, objective.pack(), settings(cfg));
    let (fc, fp) = objective.transforms(&outcome.params);
    let side =
        |t: &Option<MlpTransform>, x: &EmbeddingMatrix, fixed: Option<&ClusterMatrix>| match t {
            Some(f) => to_cluster_matrix(f.forward(x.view())),
            None => fixed.expect("validated").clone(),
        };
    Ok(GbtFit {
        claims: side(&fc, claims, fixed_claims),
        papers: side(&fp, papers, fixed_papers),
        claims_transform: fc,
        papers_transform: fp,
        trace: outcome.trace,
        converged: outcome.converged,
    })
}
