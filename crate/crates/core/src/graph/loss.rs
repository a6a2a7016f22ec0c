use std::fmt;
use std::str::FromStr;

use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, shape, Error, Result};
use crate::model::{frobenius_norm, ClusterMatrix, LinkMatrix};

/// Which membership matrices are optimization variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Optimized {
    /// Both claims and papers.
    CP,
    /// Claims only; papers fixed.
    C,
    /// Papers only; claims fixed.
    P,
}

impl Optimized {
    pub fn claims(self) -> bool {
        matches!(self, Optimized::CP | Optimized::C)
    }

    pub fn papers(self) -> bool {
        matches!(self, Optimized::CP | Optimized::P)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphFamily {
    /// Memberships optimized directly.
    Gba,
    /// Memberships produced by learned embedding transforms.
    Gbt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphVariant {
    pub family: GraphFamily,
    pub optimized: Optimized,
}

impl GraphVariant {
    pub const ALL: [GraphVariant; 6] = [
        GraphVariant::new(GraphFamily::Gba, Optimized::CP),
        GraphVariant::new(GraphFamily::Gba, Optimized::C),
        GraphVariant::new(GraphFamily::Gba, Optimized::P),
        GraphVariant::new(GraphFamily::Gbt, Optimized::CP),
        GraphVariant::new(GraphFamily::Gbt, Optimized::C),
        GraphVariant::new(GraphFamily::Gbt, Optimized::P),
    ];

    pub const fn new(family: GraphFamily, optimized: Optimized) -> Self {
        Self { family, optimized }
    }
}

impl fmt::Display for GraphVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let family = match self.family {
            GraphFamily::Gba => "gba",
            GraphFamily::Gbt => "gbt",
        };
        let opt = match self.optimized {
            Optimized::CP => "cp",
            Optimized::C => "c",
            Optimized::P => "p",
        };
        write!(f, "{family}-{opt}")
    }
}

impl FromStr for GraphVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GraphVariant::ALL
            .into_iter()
            .find(|v| v.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| invalid(format!("unknown graph variant `{s}`")))
    }
}

fn check_shapes(cc: ArrayView2<'_, f64>, pp: ArrayView2<'_, f64>, l: &LinkMatrix) -> Result<()> {
    if cc.nrows() != l.n_claims() || pp.nrows() != l.n_papers() || cc.ncols() != pp.ncols() {
        return Err(shape(format!(
            "C' is {}x{}, P' is {}x{}, L is {}x{}",
            cc.nrows(),
            cc.ncols(),
            pp.nrows(),
            pp.ncols(),
            l.n_claims(),
            l.n_papers()
        )));
    }
    Ok(())
}

pub(crate) fn residual(
    cc: ArrayView2<'_, f64>,
    pp: ArrayView2<'_, f64>,
    l: &LinkMatrix,
) -> Array2<f64> {
    &cc - &l.view().dot(&pp)
}

/// `M / ||M||_F`, or zeros at the origin.
pub(crate) fn norm_gradient(m: &Array2<f64>) -> Array2<f64> {
    let n = frobenius_norm(m.view());
    if n == 0.0 {
        Array2::zeros(m.raw_dim())
    } else {
        m / n
    }
}

/// `||C' − L·P'||_F`.
pub fn reconstruction_loss(cc: &ClusterMatrix, pp: &ClusterMatrix, l: &LinkMatrix) -> Result<f64> {
    check_shapes(cc.view(), pp.view(), l)?;
    Ok(frobenius_norm(residual(cc.view(), pp.view(), l).view()))
}

/// Reconstruction loss minus `beta` times the norms of the optimized matrices.
pub fn regularized_objective(
    cc: &ClusterMatrix,
    pp: &ClusterMatrix,
    l: &LinkMatrix,
    optimized: Optimized,
    beta: f64,
) -> Result<f64> {
    check_shapes(cc.view(), pp.view(), l)?;
    Ok(objective_and_gradient(cc.view(), pp.view(), l, optimized, beta).0)
}

/// Objective value together with its gradients with respect to `C'` and `P'`.
/// The gradient of a non-optimized side is still returned (it is what the
/// transforms of GBT or the frozen block of AO would see) but carries no
/// regularizer term.
pub(crate) fn objective_and_gradient(
    cc: ArrayView2<'_, f64>,
    pp: ArrayView2<'_, f64>,
    l: &LinkMatrix,
    optimized: Optimized,
    beta: f64,
) -> (f64, Array2<f64>, Array2<f64>) {
    let r = residual(cc, pp, l);
    let dr = norm_gradient(&r);
    let mut value = frobenius_norm(r.view());
    let mut grad_c = dr.clone();
    let mut grad_p = -l.view().t().dot(&dr);
    if optimized.claims() {
        let c = cc.to_owned();
        value -= beta * frobenius_norm(cc);
        grad_c.scaled_add(-beta, &norm_gradient(&c));
    }
    if optimized.papers() {
        let p = pp.to_owned();
        value -= beta * frobenius_norm(pp);
        grad_p.scaled_add(-beta, &norm_gradient(&p));
    }
    (value, grad_c, grad_p)
}
