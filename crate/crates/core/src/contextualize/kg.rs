use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::records::ClaimMeta;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermClass {
    DiseaseDisorder,
    ConditionSymptomMedicationNutrient,
    Other,
}

impl fmt::Display for TermClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TermClass::DiseaseDisorder => "disease_disorder",
            TermClass::ConditionSymptomMedicationNutrient => {
                "condition_symptom_medication_nutrient"
            }
            TermClass::Other => "other",
        })
    }
}

impl std::str::FromStr for TermClass {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "disease_disorder" => Ok(TermClass::DiseaseDisorder),
            "condition_symptom_medication_nutrient" => {
                Ok(TermClass::ConditionSymptomMedicationNutrient)
            }
            "other" => Ok(TermClass::Other),
            other => Err(invalid(format!("unknown term class `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VocabularyTerm {
    pub term: String,
    pub class: TermClass,
}

/// Lower-cased, duplicate-free vocabulary kept in lexicographic term order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<VocabularyTerm>,
    tokens: Vec<Vec<String>>,
    index: BTreeMap<String, usize>,
}

/// Lower-cased runs of alphanumerics and hyphens.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !(c.is_alphanumeric() || c == '-'))
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

impl Vocabulary {
    pub fn new(terms: impl IntoIterator<Item = VocabularyTerm>) -> Result<Self> {
        let mut by_term = BTreeMap::new();
        for t in terms {
            let key = tokenize(&t.term).join(" ");
            if key.is_empty() {
                return Err(invalid(format!(
                    "vocabulary term `{}` has no word characters",
                    t.term
                )));
            }
            if by_term.insert(key.clone(), t.class).is_some() {
                return Err(invalid(format!("duplicate vocabulary term `{key}`")));
            }
        }
        let terms: Vec<VocabularyTerm> = by_term
            .into_iter()
            .map(|(term, class)| VocabularyTerm { term, class })
            .collect();
        let tokens = terms.iter().map(|t| tokenize(&t.term)).collect();
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.term.clone(), i))
            .collect();
        Ok(Self {
            terms,
            tokens,
            index,
        })
    }

    pub fn terms(&self) -> &[VocabularyTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, term: &str) -> Option<usize> {
        self.index.get(&tokenize(term).join(" ")).copied()
    }

    /// Indices of the distinct terms occurring in `text` as whole-word phrases.
    pub fn find_terms(&self, text: &str) -> Vec<usize> {
        let words = tokenize(text);
        let mut found = BTreeSet::new();
        for (i, phrase) in self.tokens.iter().enumerate() {
            if words.windows(phrase.len()).any(|w| w == phrase.as_slice()) {
                found.insert(i);
            }
        }
        found.into_iter().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Topology {
    Causality,
    Aspect { focal: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KgEdge {
    pub source: usize,
    pub target: usize,
    pub claim_id: String,
    pub weight: f64,
}

/// Directed multigraph over vocabulary terms; one edge per claim and
/// qualifying term pair.
#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeGraph {
    pub vocab: Vocabulary,
    pub topology: Topology,
    /// Vocabulary index of the focal term for aspect graphs.
    pub focal: Option<usize>,
    pub edges: Vec<KgEdge>,
}

impl KnowledgeGraph {
    pub fn term(&self, node: usize) -> &str {
        &self.vocab.terms[node].term
    }

    pub fn n_nodes(&self) -> usize {
        self.vocab.len()
    }
}

/// Co-occurrence graph of vocabulary terms over `claims`.
///
/// Causality graphs keep condition/symptom/medication/nutrient → disease
/// pairs; aspect graphs keep pairs with the focal term, directed toward it.
pub fn build_graph(
    claims: &[ClaimMeta],
    vocab: &Vocabulary,
    topology: Topology,
    weights: &BTreeMap<String, f64>,
) -> Result<KnowledgeGraph> {
    let focal =
        match &topology {
            Topology::Causality => None,
            Topology::Aspect { focal } => {
                if focal.trim().is_empty() {
                    return Err(invalid("aspect topology needs a focal term"));
                }
                Some(vocab.get(focal).ok_or_else(|| {
                    invalid(format!("focal term `{focal}` is not in the vocabulary"))
                })?)
            }
        };
    let mut edges = Vec::new();
    for claim in claims {
        let weight = *weights
            .get(&claim.id)
            .ok_or_else(|| invalid(format!("no weight for claim `{}`", claim.id)))?;
        if !(0.0..=1.0).contains(&weight) {
            return Err(invalid(format!(
                "weight {weight} of claim `{}` outside [0, 1]",
                claim.id
            )));
        }
        let found = vocab.find_terms(&claim.text);
        for (x, &a) in found.iter().enumerate() {
            for &b in &found[x + 1..] {
                let directed = match focal {
                    None => causal_direction(vocab, a, b),
                    Some(f) if a == f => Some((b, a)),
                    Some(f) if b == f => Some((a, b)),
                    Some(_) => None,
                };
                if let Some((source, target)) = directed {
                    edges.push(KgEdge {
                        source,
                        target,
                        claim_id: claim.id.clone(),
                        weight,
                    });
                }
            }
        }
    }
    Ok(KnowledgeGraph {
        vocab: vocab.clone(),
        topology,
        focal,
        edges,
    })
}

fn causal_direction(vocab: &Vocabulary, a: usize, b: usize) -> Option<(usize, usize)> {
    use TermClass::*;
    match (vocab.terms[a].class, vocab.terms[b].class) {
        (ConditionSymptomMedicationNutrient, DiseaseDisorder) => Some((a, b)),
        (DiseaseDisorder, ConditionSymptomMedicationNutrient) => Some((b, a)),
        _ => None,
    }
}
