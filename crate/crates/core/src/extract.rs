//! Baseline claim extractors over pre-annotated sentences.
//!
//! Dependency parsing and entity recognition happen upstream; sentences
//! arrive with their root verb, subject, object and entity spans already
//! filled in.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, shape, Error, Result};
use crate::similarity::clamped_cosine_slices;

/// Decision threshold of the context-based heuristic.
pub const DEFAULT_CONTEXT_THRESHOLD: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntityClass {
    Person,
    Organization,
    Other,
}

/// Entity mention as a byte range `[start, end)` of its sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntitySpan {
    pub start: usize,
    pub end: usize,
    pub class: EntityClass,
}

impl EntitySpan {
    pub fn surface<'a>(&self, text: &'a str) -> Option<&'a str> {
        text.get(self.start..self.end)
    }

    pub(crate) fn validate(&self, text: &str) -> Result<()> {
        if self.start >= self.end || self.surface(text).is_none() {
            return Err(invalid(format!(
                "entity span {}..{} is not a valid range of a {}-byte text",
                self.start,
                self.end,
                text.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedSentence {
    #[serde(default)]
    pub id: String,
    pub text: String,
    pub root_verb: String,
    #[serde(default)]
    pub nsubj: Option<String>,
    #[serde(default)]
    pub dobj: Option<String>,
    #[serde(default)]
    pub entities: Vec<EntitySpan>,
    #[serde(default)]
    pub embedding: Option<Vec<f64>>,
}

impl AnnotatedSentence {
    pub fn validate(&self) -> Result<()> {
        if self.root_verb.trim().is_empty() {
            return Err(invalid(format!(
                "sentence `{}` has an empty root verb",
                self.id
            )));
        }
        for e in &self.entities {
            e.validate(&self.text)?;
        }
        Ok(())
    }

    /// True when `lemma` is the head of (or a word inside) a Person or
    /// Organization mention of this sentence.
    fn is_named_agent(&self, lemma: &str) -> bool {
        self.entities
            .iter()
            .filter(|e| matches!(e.class, EntityClass::Person | EntityClass::Organization))
            .filter_map(|e| e.surface(&self.text))
            .any(|surface| {
                surface
                    .split(|c: char| !c.is_alphanumeric() && c != '-')
                    .any(|w| w.eq_ignore_ascii_case(lemma))
                    || surface.eq_ignore_ascii_case(lemma)
            })
    }
}

/// Reporting verbs (RV) and science nouns (E).
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    reporting_verbs: BTreeSet<String>,
    science_nouns: BTreeSet<String>,
}

impl Lexicon {
    pub fn new<I, J, S, T>(reporting_verbs: I, science_nouns: J) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let norm = |s: &str| s.trim().to_lowercase();
        let reporting_verbs: BTreeSet<String> = reporting_verbs
            .into_iter()
            .map(|s| norm(s.as_ref()))
            .filter(|s| !s.is_empty())
            .collect();
        let science_nouns: BTreeSet<String> = science_nouns
            .into_iter()
            .map(|s| norm(s.as_ref()))
            .filter(|s| !s.is_empty())
            .collect();
        if reporting_verbs.is_empty() || science_nouns.is_empty() {
            return Err(invalid("lexicon sets must be non-empty"));
        }
        Ok(Self {
            reporting_verbs,
            science_nouns,
        })
    }

    /// Reads two UTF-8 files with one lemma per line. Blank lines and `#` comments are skipped.
    pub fn load(verbs: &Path, nouns: &Path) -> Result<Self> {
        Self::new(read_lemmas(verbs)?, read_lemmas(nouns)?)
    }

    pub fn is_reporting_verb(&self, lemma: &str) -> bool {
        self.reporting_verbs.contains(&lemma.to_lowercase())
    }

    pub fn is_science_noun(&self, lemma: &str) -> bool {
        self.science_nouns.contains(&lemma.to_lowercase())
    }
}

fn read_lemmas(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_owned)
        .collect())
}

/// The three membership bits the grammar rule looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrammarBits {
    pub root_in_rv: bool,
    pub nsubj_in_e: bool,
    pub dobj_in_e: bool,
}

impl GrammarBits {
    pub fn of(s: &AnnotatedSentence, lex: &Lexicon) -> Self {
        let in_e = |arg: &Option<String>| {
            arg.as_deref()
                .is_some_and(|a| lex.is_science_noun(a) || s.is_named_agent(a))
        };
        Self {
            root_in_rv: lex.is_reporting_verb(&s.root_verb),
            nsubj_in_e: in_e(&s.nsubj),
            dobj_in_e: in_e(&s.dobj),
        }
    }

    pub fn verdict(self) -> bool {
        self.root_in_rv && (self.nsubj_in_e || self.dobj_in_e)
    }
}

/// `root ∈ RV ∧ (nsubj ∈ E ∨ dobj ∈ E)`, where E also admits Person and
/// Organization mentions.
pub fn grammar_heuristic(s: &AnnotatedSentence, lex: &Lexicon) -> bool {
    GrammarBits::of(s, lex).verdict()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PostingRecord {
    pub id: String,
    #[serde(default)]
    pub text: String,
    #[serde(default)]
    pub embedding: Vec<f64>,
    #[serde(default)]
    pub reposts: u64,
    #[serde(default)]
    pub likes: u64,
    #[serde(default)]
    pub target_sentence_ids: BTreeSet<String>,
}

impl PostingRecord {
    pub fn raw_popularity(&self) -> u64 {
        self.reposts + self.likes
    }

    pub fn references(&self, sentence_id: &str) -> bool {
        self.target_sentence_ids.contains(sentence_id)
    }
}

/// Popularity share of each posting among those referencing `sentence_id`.
///
/// When the referencing postings have zero total popularity the shares are
/// uniform. Postings that do not reference the sentence are absent from the map.
pub fn normalized_popularity(
    postings: &[PostingRecord],
    sentence_id: &str,
) -> BTreeMap<String, f64> {
    let refs: Vec<&PostingRecord> = postings
        .iter()
        .filter(|p| p.references(sentence_id))
        .collect();
    let total: u64 = refs.iter().map(|p| p.raw_popularity()).sum();
    refs.iter()
        .map(|p| {
            let share = if total == 0 {
                1.0 / refs.len() as f64
            } else {
                p.raw_popularity() as f64 / total as f64
            };
            (p.id.clone(), share)
        })
        .collect()
}

/// Largest `sim(s, p) · pop(p)` over postings referencing the sentence, or
/// `None` when nothing references it.
pub fn context_score(
    sentence_embedding: &[f64],
    sentence_id: &str,
    postings: &[PostingRecord],
) -> Result<Option<f64>> {
    let shares = normalized_popularity(postings, sentence_id);
    let mut best: Option<f64> = None;
    for p in postings.iter().filter(|p| p.references(sentence_id)) {
        if p.embedding.len() != sentence_embedding.len() {
            return Err(shape(format!(
                "posting `{}` has dim {}, sentence has dim {}",
                p.id,
                p.embedding.len(),
                sentence_embedding.len()
            )));
        }
        let term = clamped_cosine_slices(sentence_embedding, &p.embedding) * shares[&p.id];
        best = Some(best.map_or(term, |b| b.max(term)));
    }
    Ok(best)
}

/// `∃p: sim(s, p) · pop(p) ≥ threshold`.
pub fn context_heuristic(
    sentence_embedding: &[f64],
    sentence_id: &str,
    postings: &[PostingRecord],
    threshold: f64,
) -> Result<bool> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(invalid(format!("threshold {threshold} outside [0, 1]")));
    }
    Ok(context_score(sentence_embedding, sentence_id, postings)?
        .is_some_and(|score| score >= threshold))
}
