//! Graph-based clustering: fit memberships to the claim–paper link matrix by
//! minimizing `||C' − L·P'||_F` with an anti-uniformity regularizer.
//!
//! Two families share the objective. Adaptation (GBA) optimizes the
//! memberships directly through row-softmax logits. Transformation (GBT)
//! optimizes small networks that map embeddings to memberships. Each family
//! can optimize both sides or keep one side fixed from a content clustering.

mod gba;
mod gbt;
mod loss;
mod mlp;
pub mod softmax;

pub use gba::{fit_gba, GbaObjective, GraphFit};
pub use gbt::{fit_gbt, fit_gbt_from, GbtFit, GbtObjective};
pub use loss::{reconstruction_loss, regularized_objective, GraphFamily, GraphVariant, Optimized};
pub use mlp::{MlpTransform, DEFAULT_HIDDEN_DIM};
pub use softmax::random_memberships;

pub(crate) use loss::{norm_gradient, residual};
