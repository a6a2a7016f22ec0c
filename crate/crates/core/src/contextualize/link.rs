use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::anonymize::anonymize_claim;
use crate::error::{shape, Result};
use crate::records::{ClaimMeta, PaperRecord};
use crate::similarity::{clamped_cosine_slices, jaccard};

/// Similarity a verified claim needs to count as the same claim.
pub const DEFAULT_LINK_THRESHOLD: f64 = 0.9;

/// Entries per context list.
pub const DEFAULT_CONTEXT_SIZE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Label {
    #[serde(alias = "true", alias = "TRUE")]
    True,
    #[serde(alias = "false", alias = "FALSE")]
    False,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifiedClaim {
    pub text: String,
    pub label: Label,
    pub embedding: Vec<f64>,
    #[serde(default)]
    pub entities: BTreeSet<String>,
}

/// Clamped cosine of the embeddings, averaged with the entity Jaccard index
/// when both sides name entities.
pub fn sts(
    a: &[f64],
    a_entities: &BTreeSet<String>,
    b: &[f64],
    b_entities: &BTreeSet<String>,
) -> Result<f64> {
    if a.len() != b.len() {
        return Err(shape(format!(
            "embeddings of dim {} and {}",
            a.len(),
            b.len()
        )));
    }
    let cos = clamped_cosine_slices(a, b);
    if a_entities.is_empty() || b_entities.is_empty() {
        Ok(cos)
    } else {
        Ok(0.5 * cos + 0.5 * jaccard(a_entities, b_entities))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifiedMatch {
    pub text: String,
    pub label: Label,
    pub sts: f64,
}

/// Verified claims at least `threshold` similar to `claim`, most similar first.
pub fn link_verified(
    claim: &ClaimMeta,
    db: &[VerifiedClaim],
    threshold: f64,
) -> Result<Vec<VerifiedMatch>> {
    let ents = claim.entity_set();
    let mut out = Vec::new();
    for v in db {
        let s = sts(&claim.embedding, &ents, &v.embedding, &v.entities)?;
        if s >= threshold {
            out.push(VerifiedMatch {
                text: v.text.clone(),
                label: v.label,
                sts: s,
            });
        }
    }
    // stable: equal scores keep database order
    out.sort_by(|a, b| b.sts.total_cmp(&a.sts));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredItem {
    pub id: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextBundle {
    pub claim_id: String,
    pub anonymized_text: String,
    pub articles: Vec<ScoredItem>,
    pub papers: Vec<ScoredItem>,
    pub verified: Vec<VerifiedMatch>,
}

impl ContextBundle {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "claim {}: {}", self.claim_id, self.anonymized_text);
        let _ = writeln!(s, "  articles:");
        for a in &self.articles {
            let _ = writeln!(s, "    {} ({:.3})", a.id, a.score);
        }
        let _ = writeln!(s, "  papers:");
        for p in &self.papers {
            let _ = writeln!(s, "    {} ({:.3})", p.id, p.score);
        }
        let _ = writeln!(s, "  verified claims:");
        if self.verified.is_empty() {
            let _ = writeln!(s, "    none");
        }
        for v in &self.verified {
            let _ = writeln!(s, "    [{:?}] {} ({:.3})", v.label, v.text, v.sts);
        }
        s
    }
}

/// Fact-checking context of `claim` drawn from its cluster.
///
/// Articles are scored by the best similarity between one of their claims and
/// `claim`, with the claim's own article always first; papers by clamped
/// cosine to the claim embedding. Ties go to the smaller id.
pub fn assemble_context(
    claim: &ClaimMeta,
    cluster_claims: &[ClaimMeta],
    cluster_papers: &[PaperRecord],
    db: &[VerifiedClaim],
    k: usize,
    threshold: f64,
) -> Result<ContextBundle> {
    let ents = claim.entity_set();
    let mut article_scores: BTreeMap<&str, f64> = BTreeMap::new();
    for other in cluster_claims {
        if other.article_id.is_empty() || other.article_id == claim.article_id {
            continue;
        }
        let s = sts(
            &claim.embedding,
            &ents,
            &other.embedding,
            &other.entity_set(),
        )?;
        let slot = article_scores.entry(&other.article_id).or_insert(s);
        *slot = slot.max(s);
    }
    let mut articles = Vec::new();
    if !claim.article_id.is_empty() {
        articles.push(ScoredItem {
            id: claim.article_id.clone(),
            score: 1.0,
        });
    }
    articles.extend(top_k(
        article_scores
            .into_iter()
            .map(|(id, s)| (id.to_string(), s))
            .collect(),
        k.saturating_sub(articles.len()),
    ));

    let mut papers = Vec::with_capacity(cluster_papers.len());
    for p in cluster_papers {
        if p.embedding.len() != claim.embedding.len() {
            return Err(shape(format!(
                "paper `{}` has dim {}",
                p.id,
                p.embedding.len()
            )));
        }
        papers.push((
            p.id.clone(),
            clamped_cosine_slices(&claim.embedding, &p.embedding),
        ));
    }

    let mut verified = link_verified(claim, db, threshold)?;
    verified.truncate(k);
    Ok(ContextBundle {
        claim_id: claim.id.clone(),
        anonymized_text: anonymize_claim(&claim.text, &claim.entities)?,
        articles,
        papers: top_k(papers, k),
        verified,
    })
}

fn top_k(mut items: Vec<(String, f64)>, k: usize) -> Vec<ScoredItem> {
    items.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    items.truncate(k);
    items
        .into_iter()
        .map(|(id, score)| ScoredItem { id, score })
        .collect()
}
