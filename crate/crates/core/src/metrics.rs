//! Cluster quality: semantic coherence through a joint silhouette-style
//! score, interconnection coherence through link-based recommendation.

use ndarray::{Array1, Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, shape, Error, Result};
use crate::model::{ClusterMatrix, EmbeddingMatrix, LinkMatrix};
use crate::similarity::cosine;

/// Semantic similarity of two embeddings: cosine clamped to `[0, 1]`.
pub fn sts(u: ArrayView1<'_, f64>, v: ArrayView1<'_, f64>) -> Result<f64> {
    if u.len() != v.len() {
        return Err(shape(format!(
            "vectors of length {} and {}",
            u.len(),
            v.len()
        )));
    }
    cosine(u, v)
        .map(|c| c.max(0.0))
        .ok_or(Error::UndefinedSimilarity)
}

/// Per-cluster mean embeddings of the claims and of the papers.
#[derive(Debug, Clone)]
pub struct ClusterCentroids {
    pub claims: Vec<Option<Array1<f64>>>,
    pub papers: Vec<Option<Array1<f64>>>,
}

impl ClusterCentroids {
    pub fn compute(
        claims: &EmbeddingMatrix,
        papers: &EmbeddingMatrix,
        claim_labels: &[usize],
        paper_labels: &[usize],
        n_clusters: usize,
    ) -> Self {
        let means = |x: &EmbeddingMatrix, labels: &[usize]| {
            let mut sums = Array2::<f64>::zeros((n_clusters, x.dim()));
            let mut counts = vec![0usize; n_clusters];
            for (i, &l) in labels.iter().enumerate() {
                let mut row = sums.row_mut(l);
                row += &x.row(i);
                counts[l] += 1;
            }
            counts
                .iter()
                .enumerate()
                .map(|(c, &n)| (n > 0).then(|| &sums.row(c) / n as f64))
                .collect::<Vec<_>>()
        };
        Self {
            claims: means(claims, claim_labels),
            papers: means(papers, paper_labels),
        }
    }

    pub fn is_empty(&self, cluster: usize) -> bool {
        self.claims[cluster].is_none() && self.papers[cluster].is_none()
    }
}

/// Mean over non-empty clusters of the average similarity between every
/// member (claim or paper) and each of the cluster's claims and papers
/// centroids. Members are grouped by hard assignment. Pairs involving a
/// zero-norm vector contribute 0.
pub fn modified_asw(
    claims: &EmbeddingMatrix,
    papers: &EmbeddingMatrix,
    cc: &ClusterMatrix,
    pp: &ClusterMatrix,
) -> Result<f64> {
    if claims.rows() != cc.rows() || papers.rows() != pp.rows() {
        return Err(shape(
            "memberships and embeddings have different row counts",
        ));
    }
    if claims.dim() != papers.dim() || cc.n_clusters() != pp.n_clusters() {
        return Err(shape("claims and papers disagree on dim or cluster count"));
    }
    let k = cc.n_clusters();
    let cl = cc.hard_assign();
    let pl = pp.hard_assign();
    let centroids = ClusterCentroids::compute(claims, papers, &cl, &pl, k);

    let mut members: Vec<Vec<ArrayView1<'_, f64>>> = vec![Vec::new(); k];
    for (i, &l) in cl.iter().enumerate() {
        members[l].push(claims.row(i));
    }
    for (j, &l) in pl.iter().enumerate() {
        members[l].push(papers.row(j));
    }

    let mut total = 0.0;
    let mut non_empty = 0usize;
    for (c, elems) in members.iter().enumerate() {
        if elems.is_empty() {
            continue;
        }
        let cents: Vec<&Array1<f64>> = centroids.claims[c]
            .iter()
            .chain(centroids.papers[c].iter())
            .collect();
        let mut sum = 0.0;
        for e in elems {
            for cent in &cents {
                sum += sts(*e, cent.view()).unwrap_or(0.0);
            }
        }
        total += sum / (cents.len() * elems.len()) as f64;
        non_empty += 1;
    }
    if non_empty == 0 {
        return Err(invalid("no non-empty cluster"));
    }
    Ok(total / non_empty as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Claims,
    Papers,
}

/// Clusters recommended for one item from the memberships of its links.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub scores: Vec<f64>,
    /// Cluster indices by descending score, lowest index first on ties.
    /// Empty when the item has no links.
    pub ranking: Vec<usize>,
}

impl Recommendation {
    pub fn is_linked(&self) -> bool {
        !self.ranking.is_empty()
    }
}

/// For `Side::Claims`, scores are the rows of `L·P'` with `memberships = P'`;
/// for `Side::Papers`, the rows of `Lᵀ·C'` with `memberships = C'`.
pub fn recommend(
    links: &LinkMatrix,
    memberships: &ClusterMatrix,
    side: Side,
) -> Result<Vec<Recommendation>> {
    let l = match side {
        Side::Claims => links.view().to_owned(),
        Side::Papers => links.view().t().to_owned(),
    };
    if l.ncols() != memberships.rows() {
        return Err(shape(format!(
            "{side:?} recommendation needs {} membership rows, got {}",
            l.ncols(),
            memberships.rows()
        )));
    }
    let scores = l.dot(&memberships.view());
    Ok(l.outer_iter()
        .zip(scores.outer_iter())
        .map(|(links_row, s)| {
            let scores: Vec<f64> = s.to_vec();
            let ranking = if links_row.iter().any(|&v| v != 0.0) {
                rank_desc(&scores)
            } else {
                Vec::new()
            };
            Recommendation { scores, ranking }
        })
        .collect())
}

fn rank_desc(scores: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    idx
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecallReport {
    /// Hit rate over linked claims, if any.
    pub claims: Option<f64>,
    /// Hit rate over linked papers, if any.
    pub papers: Option<f64>,
    pub mean: f64,
}

pub fn recall_report(
    cc: &ClusterMatrix,
    pp: &ClusterMatrix,
    links: &LinkMatrix,
    k: usize,
) -> Result<RecallReport> {
    if k == 0 {
        return Err(invalid("k must be >= 1"));
    }
    if cc.n_clusters() != pp.n_clusters() {
        return Err(shape("claims and papers disagree on cluster count"));
    }
    let side_rate =
        |own: &ClusterMatrix, other: &ClusterMatrix, side: Side| -> Result<Option<f64>> {
            let recs = recommend(links, other, side)?;
            if recs.len() != own.rows() {
                return Err(shape("membership rows do not match the link matrix"));
            }
            let labels = own.hard_assign();
            let (mut hits, mut linked) = (0usize, 0usize);
            for (rec, label) in recs.iter().zip(labels) {
                if !rec.is_linked() {
                    continue;
                }
                linked += 1;
                if rec.ranking.iter().take(k).any(|&c| c == label) {
                    hits += 1;
                }
            }
            Ok((linked > 0).then(|| hits as f64 / linked as f64))
        };
    let claims = side_rate(cc, pp, Side::Claims)?;
    let papers = side_rate(pp, cc, Side::Papers)?;
    let mean = match (claims, papers) {
        (Some(a), Some(b)) => (a + b) / 2.0,
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => return Err(invalid("no linked claims or papers")),
    };
    Ok(RecallReport {
        claims,
        papers,
        mean,
    })
}

/// Mean over both sides of the fraction of linked items whose own hard
/// cluster is among the top `k` recommended clusters.
pub fn recall_at_k(
    cc: &ClusterMatrix,
    pp: &ClusterMatrix,
    links: &LinkMatrix,
    k: usize,
) -> Result<f64> {
    Ok(recall_report(cc, pp, links, k)?.mean)
}
