//! Hybrid clustering by alternate optimization.
//!
//! Starting from a content clustering, the claims block and the papers block
//! are refined in turn while the other block stays frozen. `gamma` trades the
//! graph reconstruction term against staying close to the initialization.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, shape, Error, Result};
use crate::graph::softmax::{logits_from, row_softmax, softmax_backward, to_cluster_matrix};
use crate::graph::{norm_gradient, residual};
use crate::model::{frobenius_norm, ClusterMatrix, LinkMatrix, RunConfig};
use crate::optim::{descend, DescentSettings, Objective};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Block {
    Claims,
    Papers,
}

/// Named gamma settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AoPreset {
    Content,
    Balanced,
    Graph,
}

impl AoPreset {
    pub const ALL: [AoPreset; 3] = [AoPreset::Content, AoPreset::Balanced, AoPreset::Graph];

    pub fn gamma(self) -> f64 {
        match self {
            AoPreset::Content => 0.1,
            AoPreset::Balanced => 0.5,
            AoPreset::Graph => 0.9,
        }
    }
}

impl fmt::Display for AoPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AoPreset::Content => "ao-content",
            AoPreset::Balanced => "ao-balanced",
            AoPreset::Graph => "ao-graph",
        })
    }
}

impl FromStr for AoPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AoPreset::ALL
            .into_iter()
            .find(|p| p.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| invalid(format!("unknown AO preset `{s}`")))
    }
}

/// Inner and outer iteration budgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AoSchedule {
    pub inner_steps: usize,
    pub outer_rounds: usize,
}

impl Default for AoSchedule {
    fn default() -> Self {
        Self {
            inner_steps: 50,
            outer_rounds: 20,
        }
    }
}

fn check(
    cc: ArrayView2<'_, f64>,
    pp: ArrayView2<'_, f64>,
    l: &LinkMatrix,
    c_init: ArrayView2<'_, f64>,
    p_init: ArrayView2<'_, f64>,
) -> Result<()> {
    if cc.nrows() != l.n_claims()
        || pp.nrows() != l.n_papers()
        || cc.dim() != c_init.dim()
        || pp.dim() != p_init.dim()
        || cc.ncols() != pp.ncols()
    {
        return Err(shape("hybrid loss operands do not conform"));
    }
    Ok(())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(invalid(format!("gamma must lie in [0, 1], got {gamma}")));
    }
    Ok(())
}

/// Block loss: `γ||C' − L·P'|| + (1 − γ)||X' − X'_init||` where `X` is the
/// block being optimized.
pub fn hybrid_loss(
    cc: &ClusterMatrix,
    pp: &ClusterMatrix,
    l: &LinkMatrix,
    c_init: &ClusterMatrix,
    p_init: &ClusterMatrix,
    gamma: f64,
    block: Block,
) -> Result<f64> {
    check(cc.view(), pp.view(), l, c_init.view(), p_init.view())?;
    check_gamma(gamma)?;
    let recon = frobenius_norm(residual(cc.view(), pp.view(), l).view());
    let anchor = match block {
        Block::Claims => frobenius_norm((&cc.view() - &c_init.view()).view()),
        Block::Papers => frobenius_norm((&pp.view() - &p_init.view()).view()),
    };
    Ok(gamma * recon + (1.0 - gamma) * anchor)
}

/// `γ||C' − L·P'|| + (1 − γ)(||C' − C'_init|| + ||P' − P'_init||)`: the sum of
/// both block losses' distinct terms, reported in the AO trace.
pub fn combined_loss(
    cc: ArrayView2<'_, f64>,
    pp: ArrayView2<'_, f64>,
    l: &LinkMatrix,
    c_init: ArrayView2<'_, f64>,
    p_init: ArrayView2<'_, f64>,
    gamma: f64,
) -> f64 {
    let recon = frobenius_norm(residual(cc, pp, l).view());
    let dc = frobenius_norm((&cc - &c_init).view());
    let dp = frobenius_norm((&pp - &p_init).view());
    gamma * recon + (1.0 - gamma) * (dc + dp)
}

/// Combined loss as a function of one block's softmax logits, the other block frozen.
///
/// Its gradient equals the gradient of [`hybrid_loss`] for that block: the
/// frozen block's anchor term is constant.
pub struct HybridBlockObjective<'a> {
    block: Block,
    links: &'a LinkMatrix,
    frozen: ArrayView2<'a, f64>,
    c_init: ArrayView2<'a, f64>,
    p_init: ArrayView2<'a, f64>,
    gamma: f64,
    rows: usize,
    n_clusters: usize,
}

impl<'a> HybridBlockObjective<'a> {
    pub fn new(
        block: Block,
        links: &'a LinkMatrix,
        frozen: ArrayView2<'a, f64>,
        c_init: &'a ClusterMatrix,
        p_init: &'a ClusterMatrix,
        gamma: f64,
    ) -> Result<Self> {
        check_gamma(gamma)?;
        let rows = match block {
            Block::Claims => {
                check(c_init.view(), frozen, links, c_init.view(), p_init.view())?;
                links.n_claims()
            }
            Block::Papers => {
                check(frozen, p_init.view(), links, c_init.view(), p_init.view())?;
                links.n_papers()
            }
        };
        Ok(Self {
            block,
            links,
            frozen,
            c_init: c_init.view(),
            p_init: p_init.view(),
            gamma,
            rows,
            n_clusters: c_init.n_clusters(),
        })
    }

    pub fn memberships(&self, params: &[f64]) -> Array2<f64> {
        let z = ArrayView2::from_shape((self.rows, self.n_clusters), params).expect("block shape");
        row_softmax(z)
    }

    fn operands<'b>(&'b self, own: &'b Array2<f64>) -> (ArrayView2<'b, f64>, ArrayView2<'b, f64>) {
        match self.block {
            Block::Claims => (own.view(), self.frozen),
            Block::Papers => (self.frozen, own.view()),
        }
    }
}

impl Objective for HybridBlockObjective<'_> {
    fn n_params(&self) -> usize {
        self.rows * self.n_clusters
    }

    fn value(&self, params: &[f64]) -> f64 {
        let own = self.memberships(params);
        let (cc, pp) = self.operands(&own);
        combined_loss(cc, pp, self.links, self.c_init, self.p_init, self.gamma)
    }

    fn value_and_gradient(&self, params: &[f64]) -> (f64, Vec<f64>) {
        let own = self.memberships(params);
        let (cc, pp) = self.operands(&own);
        let value = combined_loss(cc, pp, self.links, self.c_init, self.p_init, self.gamma);
        let dr = norm_gradient(&residual(cc, pp, self.links));
        let (mut grad, anchor) = match self.block {
            Block::Claims => (dr, self.c_init),
            Block::Papers => (-self.links.view().t().dot(&dr), self.p_init),
        };
        grad *= self.gamma;
        grad.scaled_add(1.0 - self.gamma, &norm_gradient(&(&own - &anchor)));
        let dz = softmax_backward(own.view(), grad.view());
        (value, dz.iter().copied().collect())
    }
}

#[derive(Debug, Clone)]
pub struct AoFit {
    pub claims: ClusterMatrix,
    pub papers: ClusterMatrix,
    /// Combined loss at the start and after every accepted sub-step.
    pub trace: Vec<f64>,
    pub rounds: usize,
    pub converged: bool,
}

pub fn fit_ao(
    c_init: &ClusterMatrix,
    p_init: &ClusterMatrix,
    links: &LinkMatrix,
    gamma: f64,
    cfg: &RunConfig,
) -> Result<AoFit> {
    fit_ao_with(c_init, p_init, links, gamma, cfg, AoSchedule::default())
}

pub fn fit_ao_with(
    c_init: &ClusterMatrix,
    p_init: &ClusterMatrix,
    links: &LinkMatrix,
    gamma: f64,
    cfg: &RunConfig,
    schedule: AoSchedule,
) -> Result<AoFit> {
    check_gamma(gamma)?;
    cfg.validate()?;
    check(
        c_init.view(),
        p_init.view(),
        links,
        c_init.view(),
        p_init.view(),
    )?;

    let inner = DescentSettings {
        step_size: cfg.step_size,
        max_iters: schedule.inner_steps,
        tolerance: cfg.tolerance,
    };
    let mut zc: Vec<f64> = logits_from(c_init).iter().copied().collect();
    let mut zp: Vec<f64> = logits_from(p_init).iter().copied().collect();
    let k = c_init.n_clusters();
    let softmax = |z: &[f64], rows: usize| {
        row_softmax(ArrayView2::from_shape((rows, k), z).expect("block shape"))
    };
    let mut cc = softmax(&zc, links.n_claims());
    let mut pp = softmax(&zp, links.n_papers());
    let mut current = combined_loss(
        cc.view(),
        pp.view(),
        links,
        c_init.view(),
        p_init.view(),
        gamma,
    );
    let mut trace = vec![current];
    let mut rounds = 0;
    let mut converged = false;

    while rounds < schedule.outer_rounds {
        rounds += 1;
        let before = current;

        let obj =
            HybridBlockObjective::new(Block::Claims, links, pp.view(), c_init, p_init, gamma)?;
        let out = descend(&obj, zc, inner);
        trace.extend_from_slice(&out.trace[1..]);
        zc = out.params;
        cc = softmax(&zc, links.n_claims());

        let obj =
            HybridBlockObjective::new(Block::Papers, links, cc.view(), c_init, p_init, gamma)?;
        let out = descend(&obj, zp, inner);
        trace.extend_from_slice(&out.trace[1..]);
        zp = out.params;
        pp = softmax(&zp, links.n_papers());

        current = *trace.last().expect("trace starts non-empty");
        if before - current < cfg.tolerance {
            converged = true;
            break;
        }
    }

    Ok(AoFit {
        claims: to_cluster_matrix(cc),
        papers: to_cluster_matrix(pp),
        trace,
        rounds,
        converged,
    })
}
