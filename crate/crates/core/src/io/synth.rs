use std::collections::{BTreeMap, BTreeSet};

use ndarray::Array2;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use super::corpus::CorpusBundle;
use crate::contextualize::{Label, TermClass, VerifiedClaim, VocabularyTerm};
use crate::error::{invalid, Result};
use crate::extract::{EntityClass, EntitySpan, PostingRecord};
use crate::model::{EmbeddingMatrix, LinkMatrix};
use crate::records::{ArticleRecord, ClaimMeta, PaperRecord};
use crate::rng::substream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthParams {
    pub n_clusters: usize,
    pub n_claims: usize,
    pub n_papers: usize,
    pub dim: usize,
    /// Standard deviation of points around their blob center.
    pub noise: f64,
    /// Probability that a claim links a paper of a random blob.
    pub link_noise: f64,
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            n_clusters: 5,
            n_claims: 200,
            n_papers: 100,
            dim: 16,
            noise: 0.5,
            link_noise: 0.05,
            seed: 0,
        }
    }
}

/// Synthetic corpus with its planted blob labels and the side files the
/// ranking stage reads.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub bundle: CorpusBundle,
    pub claim_labels: Vec<usize>,
    pub paper_labels: Vec<usize>,
    pub vocabulary: Vec<VocabularyTerm>,
    pub outlets: BTreeMap<String, f64>,
    pub verified: Vec<VerifiedClaim>,
}

const OUTLETS: [(&str, Option<f64>); 5] = [
    ("science-daily", Some(0.9)),
    ("health-wire", Some(0.6)),
    ("buzz-feed-health", Some(0.3)),
    ("miracle-cures", Some(0.05)),
    ("local-herald", None),
];

const CONDITIONS_PER_BLOB: usize = 3;

fn gauss(rng: &mut crate::rng::Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn disease(k: usize) -> String {
    format!("disease-{k}")
}

fn condition(k: usize, j: usize) -> String {
    format!("condition-{k}-{j}")
}

/// `K` Gaussian blobs shared by claims and papers. Item `i` belongs to blob
/// `i mod K`; each claim links one paper, from its own blob with probability
/// `1 − link_noise` and from a uniformly drawn blob otherwise.
pub fn generate_synthetic(p: &SynthParams) -> Result<SyntheticCorpus> {
    let k = p.n_clusters;
    if k == 0 || p.dim == 0 || k > p.n_claims.min(p.n_papers) {
        return Err(invalid(format!(
            "need 1 <= K <= min(claims, papers) and dim >= 1; got K={k}, {} claims, {} papers, dim {}",
            p.n_claims, p.n_papers, p.dim
        )));
    }
    if !(p.noise >= 0.0 && p.noise.is_finite()) || !(0.0..=1.0).contains(&p.link_noise) {
        return Err(invalid(
            "noise must be finite and >= 0, link_noise in [0, 1]",
        ));
    }

    let mut center_rng = substream(p.seed, "synth/centers");
    let centers: Array2<f64> = Array2::from_shape_simple_fn((k, p.dim), || gauss(&mut center_rng));
    let mut point_rng = substream(p.seed, "synth/points");
    let mut points = |n: usize| {
        let mut x = Array2::<f64>::zeros((n, p.dim));
        for (i, mut row) in x.outer_iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let z: f64 = StandardNormal.sample(&mut point_rng);
                *v = centers[[i % k, j]] + p.noise * z;
            }
        }
        x
    };
    let claim_x = points(p.n_claims);
    let paper_x = points(p.n_papers);
    let claim_labels: Vec<usize> = (0..p.n_claims).map(|i| i % k).collect();
    let paper_labels: Vec<usize> = (0..p.n_papers).map(|j| j % k).collect();

    let width = |n: usize| n.to_string().len().max(4);
    let claim_id = |i: usize| format!("c{i:0w$}", w = width(p.n_claims));
    let paper_id = |j: usize| format!("p{j:0w$}", w = width(p.n_papers));
    let article_id = |i: usize| format!("a{i:0w$}", w = width(p.n_claims));
    let posting_id = |i: usize| format!("s{i:0w$}", w = width(p.n_claims));

    let mut link_rng = substream(p.seed, "synth/links");
    let mut pairs = Vec::with_capacity(p.n_claims);
    for (i, &label) in claim_labels.iter().enumerate() {
        let blob = if link_rng.random_bool(p.link_noise) {
            link_rng.random_range(0..k)
        } else {
            label
        };
        // papers of blob b are b, b + K, b + 2K, …
        let members = (p.n_papers - blob).div_ceil(k);
        let paper = blob + k * link_rng.random_range(0..members);
        pairs.push((i, paper));
    }

    let mut meta_rng = substream(p.seed, "synth/meta");
    let mut claims = Vec::with_capacity(p.n_claims);
    let mut articles = Vec::with_capacity(p.n_claims);
    let mut postings = Vec::with_capacity(p.n_claims);
    for (i, &(_, paper)) in pairs.iter().enumerate() {
        let blob = claim_labels[i];
        let mut text = String::new();
        let mut entities = Vec::new();
        if i % 4 == 0 {
            text.push_str("Alex Doe of Example Institute says ");
            entities.push(EntitySpan {
                start: 0,
                end: 8,
                class: EntityClass::Person,
            });
            entities.push(EntitySpan {
                start: 12,
                end: 29,
                class: EntityClass::Organization,
            });
        }
        let cond = condition(blob, meta_rng.random_range(0..CONDITIONS_PER_BLOB));
        text.push_str(&format!("{cond} may worsen {}", disease(blob)));
        if meta_rng.random_bool(0.2) {
            let other = meta_rng.random_range(0..k);
            text.push_str(&format!(" and {}", condition(other, 0)));
        }
        let outlet = OUTLETS[meta_rng.random_range(0..OUTLETS.len())]
            .0
            .to_string();
        let pid = posting_id(i);
        let embedding = claim_x.row(i).to_vec();
        postings.push(PostingRecord {
            id: pid.clone(),
            text: format!("shared: {text}"),
            embedding: embedding
                .iter()
                .map(|v| v + 0.1 * gauss(&mut meta_rng) * p.noise)
                .collect(),
            reposts: meta_rng.random_range(0..500),
            likes: meta_rng.random_range(0..2000),
            target_sentence_ids: BTreeSet::from([claim_id(i)]),
        });
        articles.push(ArticleRecord {
            id: article_id(i),
            outlet: outlet.clone(),
            paper_ids: vec![paper_id(paper)],
            claim_ids: vec![claim_id(i)],
        });
        claims.push(ClaimMeta {
            id: claim_id(i),
            text,
            entities,
            embedding,
            posting_ids: BTreeSet::from([pid]),
            article_id: article_id(i),
            outlet,
        });
    }
    let papers = (0..p.n_papers)
        .map(|j| PaperRecord {
            id: paper_id(j),
            title: format!("A study of {}", disease(paper_labels[j])),
            embedding: paper_x.row(j).to_vec(),
        })
        .collect();

    let mut vocabulary = Vec::new();
    for b in 0..k {
        vocabulary.push(VocabularyTerm {
            term: disease(b),
            class: TermClass::DiseaseDisorder,
        });
        for j in 0..CONDITIONS_PER_BLOB {
            vocabulary.push(VocabularyTerm {
                term: condition(b, j),
                class: TermClass::ConditionSymptomMedicationNutrient,
            });
        }
    }
    let outlets = OUTLETS
        .iter()
        .filter_map(|(o, s)| s.map(|s| (o.to_string(), s)))
        .collect();
    let mut verified_rng = substream(p.seed, "synth/verified");
    let verified = (0..k)
        .flat_map(|b| [(b, Label::False), (b, Label::True)])
        .map(|(b, label)| VerifiedClaim {
            text: format!("{} may worsen {}", condition(b, 0), disease(b)),
            label,
            embedding: centers
                .row(b)
                .iter()
                .map(|c| c + 0.05 * gauss(&mut verified_rng))
                .collect(),
            entities: BTreeSet::new(),
        })
        .collect();

    let bundle = CorpusBundle {
        claims,
        papers,
        postings,
        articles,
        claim_embeddings: EmbeddingMatrix::new(claim_x)?,
        paper_embeddings: EmbeddingMatrix::new(paper_x)?,
        links: LinkMatrix::from_pairs(p.n_claims, p.n_papers, &pairs)?,
    };
    Ok(SyntheticCorpus {
        bundle,
        claim_labels,
        paper_labels,
        vocabulary,
        outlets,
        verified,
    })
}
