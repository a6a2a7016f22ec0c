//! Corpus records shared by ingestion, ranking and context assembly.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::extract::EntitySpan;

/// A claim together with everything the ranking stage needs about it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimMeta {
    pub id: String,
    pub text: String,
    #[serde(default)]
    pub entities: Vec<EntitySpan>,
    #[serde(default)]
    pub embedding: Vec<f64>,
    #[serde(default)]
    pub posting_ids: BTreeSet<String>,
    #[serde(default)]
    pub article_id: String,
    #[serde(default)]
    pub outlet: String,
}

impl ClaimMeta {
    pub fn validate(&self) -> Result<()> {
        if self.embedding.iter().any(|v| !v.is_finite()) {
            return Err(invalid(format!(
                "claim `{}` has a non-finite embedding",
                self.id
            )));
        }
        for span in &self.entities {
            span.validate(&self.text)?;
        }
        Ok(())
    }

    /// Lower-cased entity surface forms.
    pub fn entity_set(&self) -> BTreeSet<String> {
        self.entities
            .iter()
            .filter_map(|e| e.surface(&self.text))
            .map(str::to_lowercase)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub id: String,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub embedding: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleRecord {
    pub id: String,
    #[serde(default)]
    pub outlet: String,
    #[serde(default)]
    pub paper_ids: Vec<String>,
    /// Claims extracted from this article; filled in from the claims' side.
    #[serde(default)]
    pub claim_ids: Vec<String>,
}
