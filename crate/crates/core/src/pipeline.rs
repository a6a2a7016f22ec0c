//! Named clustering models and how each is initialized and fitted.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::content::{joint_content_clustering, ContentAlgorithm, ContentModelChoice};
use crate::error::{invalid, Error, Result};
use crate::graph::{fit_gba, fit_gbt, random_memberships, GraphFamily, GraphVariant, Optimized};
use crate::hybrid::{fit_ao, AoPreset};
use crate::model::{ClusterMatrix, EmbeddingMatrix, LinkMatrix, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    Content(ContentAlgorithm),
    Graph(GraphVariant),
    /// Alternate optimization with a preset gamma.
    Ao(AoPreset),
    /// Alternate optimization with the gamma of the run config.
    AoCustom,
}

impl ModelSpec {
    pub fn all_named() -> Vec<ModelSpec> {
        let mut out = vec![
            ModelSpec::Content(ContentAlgorithm::Kmeans),
            ModelSpec::Content(ContentAlgorithm::Gmm),
        ];
        out.extend(GraphVariant::ALL.into_iter().map(ModelSpec::Graph));
        out.extend(AoPreset::ALL.into_iter().map(ModelSpec::Ao));
        out
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Content(ContentAlgorithm::Kmeans) => f.write_str("kmeans"),
            ModelSpec::Content(ContentAlgorithm::Gmm) => f.write_str("gmm"),
            ModelSpec::Graph(v) => v.fmt(f),
            ModelSpec::Ao(p) => p.fmt(f),
            ModelSpec::AoCustom => f.write_str("ao"),
        }
    }
}

impl FromStr for ModelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "ao" {
            return Ok(ModelSpec::AoCustom);
        }
        ModelSpec::all_named()
            .into_iter()
            .find(|m| m.to_string() == s)
            .ok_or_else(|| invalid(format!("unknown model `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct ModelOutput {
    pub claims: ClusterMatrix,
    pub papers: ClusterMatrix,
    /// Objective trace for iterative graph and hybrid models.
    pub trace: Vec<f64>,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub model: String,
    pub n_clusters: usize,
    pub seed: u64,
    pub beta: f64,
    pub gamma: f64,
    pub iterations: usize,
    pub converged: bool,
    pub final_objective: Option<f64>,
}

impl RunSummary {
    pub fn new(spec: ModelSpec, cfg: &RunConfig, out: &ModelOutput) -> Self {
        Self {
            model: spec.to_string(),
            n_clusters: cfg.n_clusters,
            seed: cfg.seed,
            beta: cfg.beta,
            gamma: match spec {
                ModelSpec::Ao(p) => p.gamma(),
                _ => cfg.gamma,
            },
            iterations: out.trace.len().saturating_sub(1),
            converged: out.converged,
            final_objective: out.trace.last().copied(),
        }
    }
}

/// Fits `spec`.
///
/// Content clusterings (`init`) supply the fixed side of one-sided graph
/// variants and the starting point of alternate optimization. Sides that a
/// graph model optimizes start from seeded random memberships.
pub fn run_model(
    spec: ModelSpec,
    claims: &EmbeddingMatrix,
    papers: &EmbeddingMatrix,
    links: &LinkMatrix,
    init: ContentModelChoice,
    cfg: &RunConfig,
) -> Result<ModelOutput> {
    cfg.validate()?;
    let k = cfg.n_clusters;
    let content =
        |choice: ContentModelChoice| joint_content_clustering(claims, papers, choice, k, cfg.seed);
    match spec {
        ModelSpec::Content(algorithm) => {
            let (c, p) = content(ContentModelChoice { algorithm, ..init })?;
            Ok(ModelOutput {
                claims: c,
                papers: p,
                trace: Vec::new(),
                converged: true,
            })
        }
        ModelSpec::Graph(variant) => {
            let (fixed_c, fixed_p) = match variant.optimized {
                Optimized::CP => (None, None),
                _ => {
                    let (c, p) = content(init)?;
                    (Some(c), Some(p))
                }
            };
            match variant.family {
                GraphFamily::Gba => {
                    let c0 = match (&fixed_c, variant.optimized.claims()) {
                        (Some(c), false) => c.clone(),
                        _ => random_memberships(links.n_claims(), k, cfg.seed, "gba/claims"),
                    };
                    let p0 = match (&fixed_p, variant.optimized.papers()) {
                        (Some(p), false) => p.clone(),
                        _ => random_memberships(links.n_papers(), k, cfg.seed, "gba/papers"),
                    };
                    let fit = fit_gba(variant.optimized, links, &c0, &p0, cfg)?;
                    Ok(ModelOutput {
                        claims: fit.claims,
                        papers: fit.papers,
                        trace: fit.trace,
                        converged: fit.converged,
                    })
                }
                GraphFamily::Gbt => {
                    let fc = fixed_c.as_ref().filter(|_| !variant.optimized.claims());
                    let fp = fixed_p.as_ref().filter(|_| !variant.optimized.papers());
                    let fit = fit_gbt(variant.optimized, claims, papers, links, fc, fp, cfg)?;
                    Ok(ModelOutput {
                        claims: fit.claims,
                        papers: fit.papers,
                        trace: fit.trace,
                        converged: fit.converged,
                    })
                }
            }
        }
        ModelSpec::Ao(_) | ModelSpec::AoCustom => {
            let gamma = match spec {
                ModelSpec::Ao(p) => p.gamma(),
                _ => cfg.gamma,
            };
            let (c0, p0) = content(init)?;
            let fit = fit_ao(&c0, &p0, links, gamma, cfg)?;
            Ok(ModelOutput {
                claims: fit.claims,
                papers: fit.papers,
                trace: fit.trace,
                converged: fit.converged,
            })
        }
    }
}

/// Item indices of each cluster under hard assignment.
pub fn cluster_members(m: &ClusterMatrix) -> Vec<Vec<usize>> {
    let mut groups = vec![Vec::new(); m.n_clusters()];
    for (i, c) in m.hard_assign().into_iter().enumerate() {
        groups[c].push(i);
    }
    groups
}
