use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::files::{io_err, parse_err, read_id_matrix, read_jsonl, write_id_matrix, write_jsonl};
use crate::error::{invalid, shape, Error, Result};
use crate::extract::{EntitySpan, PostingRecord};
use crate::model::{EmbeddingMatrix, LinkMatrix};
use crate::records::{ArticleRecord, ClaimMeta, PaperRecord};

pub const CLAIMS_JSONL: &str = "claims.jsonl";
pub const CLAIMS_CSV: &str = "claims.csv";
pub const PAPERS_JSONL: &str = "papers.jsonl";
pub const PAPERS_CSV: &str = "papers.csv";
pub const ARTICLES_JSONL: &str = "articles.jsonl";
pub const POSTINGS_JSONL: &str = "postings.jsonl";

/// Cross-validated corpus with every collection sorted by id.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusBundle {
    pub claims: Vec<ClaimMeta>,
    pub papers: Vec<PaperRecord>,
    pub postings: Vec<PostingRecord>,
    pub articles: Vec<ArticleRecord>,
    pub claim_embeddings: EmbeddingMatrix,
    pub paper_embeddings: EmbeddingMatrix,
    pub links: LinkMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ClaimLine {
    id: String,
    text: String,
    article_id: String,
    #[serde(default)]
    entities: Vec<EntitySpan>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PaperLine {
    id: String,
    #[serde(default)]
    title: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ArticleLine {
    id: String,
    #[serde(default)]
    outlet: String,
    #[serde(default)]
    paper_ids: Vec<String>,
}

/// Paths of the corpus files inside one directory.
#[derive(Debug, Clone)]
pub struct CorpusPaths {
    pub claims: PathBuf,
    pub claim_embeddings: PathBuf,
    pub papers: PathBuf,
    pub paper_embeddings: PathBuf,
    pub articles: PathBuf,
    /// Optional; a missing file means no postings.
    pub postings: PathBuf,
}

impl CorpusPaths {
    pub fn in_dir(dir: &Path) -> Self {
        Self {
            claims: dir.join(CLAIMS_JSONL),
            claim_embeddings: dir.join(CLAIMS_CSV),
            papers: dir.join(PAPERS_JSONL),
            paper_embeddings: dir.join(PAPERS_CSV),
            articles: dir.join(ARTICLES_JSONL),
            postings: dir.join(POSTINGS_JSONL),
        }
    }
}

fn sorted_unique<T>(
    mut items: Vec<T>,
    id: impl Fn(&T) -> &str,
    kind: &str,
    path: &Path,
) -> Result<Vec<T>> {
    items.sort_by(|a, b| id(a).cmp(id(b)));
    for w in items.windows(2) {
        if id(&w[0]) == id(&w[1]) {
            return Err(parse_err(
                path,
                format!("duplicate {kind} id `{}`", id(&w[0])),
            ));
        }
    }
    Ok(items)
}

fn embeddings_for(path: &Path, ids: &[&str], kind: &'static str) -> Result<EmbeddingMatrix> {
    let rows = read_id_matrix(path)?;
    let mut by_id: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (id, v) in rows {
        if !ids.contains(&id.as_str()) {
            return Err(Error::DanglingReference {
                kind,
                id,
                from: path.display().to_string(),
            });
        }
        if by_id.insert(id.clone(), v).is_some() {
            return Err(parse_err(path, format!("duplicate embedding for `{id}`")));
        }
    }
    let mut ordered = Vec::with_capacity(ids.len());
    for id in ids {
        let v = by_id
            .remove(*id)
            .ok_or_else(|| parse_err(path, format!("no embedding for {kind} `{id}`")))?;
        ordered.push(v);
    }
    if ordered.is_empty() {
        return Err(invalid(format!("no {kind}s in {}", path.display())));
    }
    EmbeddingMatrix::from_rows(&ordered)
}

pub fn load_corpus(paths: &CorpusPaths) -> Result<CorpusBundle> {
    let claims: Vec<ClaimLine> = read_jsonl(&paths.claims)?;
    let claims = sorted_unique(claims, |c| &c.id, "claim", &paths.claims)?;
    let papers: Vec<PaperLine> = read_jsonl(&paths.papers)?;
    let papers = sorted_unique(papers, |p| &p.id, "paper", &paths.papers)?;
    let articles: Vec<ArticleLine> = read_jsonl(&paths.articles)?;
    let articles = sorted_unique(articles, |a| &a.id, "article", &paths.articles)?;
    let postings: Vec<PostingRecord> = if paths.postings.exists() {
        read_jsonl(&paths.postings)?
    } else {
        Vec::new()
    };
    let postings = sorted_unique(postings, |p| &p.id, "posting", &paths.postings)?;

    let paper_index: BTreeMap<&str, usize> = papers
        .iter()
        .enumerate()
        .map(|(i, p)| (p.id.as_str(), i))
        .collect();
    let article_index: BTreeMap<&str, usize> = articles
        .iter()
        .enumerate()
        .map(|(i, a)| (a.id.as_str(), i))
        .collect();
    let claim_ids: BTreeSet<&str> = claims.iter().map(|c| c.id.as_str()).collect();

    for a in &articles {
        for p in &a.paper_ids {
            if !paper_index.contains_key(p.as_str()) {
                return Err(Error::DanglingReference {
                    kind: "paper",
                    id: p.clone(),
                    from: a.id.clone(),
                });
            }
        }
    }
    let mut article_claims: Vec<Vec<String>> = vec![Vec::new(); articles.len()];
    for c in &claims {
        let a =
            *article_index
                .get(c.article_id.as_str())
                .ok_or_else(|| Error::DanglingReference {
                    kind: "article",
                    id: c.article_id.clone(),
                    from: c.id.clone(),
                })?;
        article_claims[a].push(c.id.clone());
    }
    let mut claim_postings: BTreeMap<&str, BTreeSet<String>> = BTreeMap::new();
    for p in &postings {
        for target in &p.target_sentence_ids {
            if !claim_ids.contains(target.as_str()) {
                return Err(Error::DanglingReference {
                    kind: "claim",
                    id: target.clone(),
                    from: p.id.clone(),
                });
            }
            claim_postings
                .entry(target.as_str())
                .or_default()
                .insert(p.id.clone());
        }
    }

    let claim_id_list: Vec<&str> = claims.iter().map(|c| c.id.as_str()).collect();
    let paper_id_list: Vec<&str> = papers.iter().map(|p| p.id.as_str()).collect();
    let claim_embeddings = embeddings_for(&paths.claim_embeddings, &claim_id_list, "claim")?;
    let paper_embeddings = embeddings_for(&paths.paper_embeddings, &paper_id_list, "paper")?;
    if claim_embeddings.dim() != paper_embeddings.dim() {
        return Err(shape(format!(
            "claims have dim {}, papers have dim {}",
            claim_embeddings.dim(),
            paper_embeddings.dim()
        )));
    }

    let mut l = Array2::zeros((claims.len(), papers.len()));
    for (i, c) in claims.iter().enumerate() {
        for p in &articles[article_index[c.article_id.as_str()]].paper_ids {
            l[[i, paper_index[p.as_str()]]] = 1.0;
        }
    }

    let claim_metas = claims
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let meta = ClaimMeta {
                id: c.id.clone(),
                text: c.text.clone(),
                entities: c.entities.clone(),
                embedding: claim_embeddings.row(i).to_vec(),
                posting_ids: claim_postings
                    .get(c.id.as_str())
                    .cloned()
                    .unwrap_or_default(),
                article_id: c.article_id.clone(),
                outlet: articles[article_index[c.article_id.as_str()]]
                    .outlet
                    .clone(),
            };
            meta.validate()
                .map_err(|e| parse_err(&paths.claims, format!("claim `{}`: {e}", c.id)))?;
            Ok(meta)
        })
        .collect::<Result<Vec<_>>>()?;
    let paper_records = papers
        .iter()
        .enumerate()
        .map(|(j, p)| PaperRecord {
            id: p.id.clone(),
            title: p.title.clone(),
            embedding: paper_embeddings.row(j).to_vec(),
        })
        .collect();
    let article_records = articles
        .into_iter()
        .zip(article_claims)
        .map(|(a, claim_ids)| ArticleRecord {
            id: a.id,
            outlet: a.outlet,
            paper_ids: a.paper_ids,
            claim_ids,
        })
        .collect();

    Ok(CorpusBundle {
        claims: claim_metas,
        papers: paper_records,
        postings,
        articles: article_records,
        claim_embeddings,
        paper_embeddings,
        links: LinkMatrix::new(l)?,
    })
}

pub fn load_corpus_dir(dir: &Path) -> Result<CorpusBundle> {
    load_corpus(&CorpusPaths::in_dir(dir))
}

/// Writes the bundle in the layout `load_corpus_dir` reads.
pub fn save_corpus(bundle: &CorpusBundle, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let paths = CorpusPaths::in_dir(dir);
    let claims: Vec<ClaimLine> = bundle
        .claims
        .iter()
        .map(|c| ClaimLine {
            id: c.id.clone(),
            text: c.text.clone(),
            article_id: c.article_id.clone(),
            entities: c.entities.clone(),
        })
        .collect();
    write_jsonl(&paths.claims, &claims)?;
    let papers: Vec<PaperLine> = bundle
        .papers
        .iter()
        .map(|p| PaperLine {
            id: p.id.clone(),
            title: p.title.clone(),
        })
        .collect();
    write_jsonl(&paths.papers, &papers)?;
    let articles: Vec<ArticleLine> = bundle
        .articles
        .iter()
        .map(|a| ArticleLine {
            id: a.id.clone(),
            outlet: a.outlet.clone(),
            paper_ids: a.paper_ids.clone(),
        })
        .collect();
    write_jsonl(&paths.articles, &articles)?;
    write_jsonl(&paths.postings, &bundle.postings)?;
    write_id_matrix(
        &paths.claim_embeddings,
        "v",
        bundle.claim_embeddings.dim(),
        bundle
            .claims
            .iter()
            .zip(bundle.claim_embeddings.view().outer_iter())
            .map(|(c, r)| (c.id.as_str(), r.to_vec())),
    )?;
    write_id_matrix(
        &paths.paper_embeddings,
        "v",
        bundle.paper_embeddings.dim(),
        bundle
            .papers
            .iter()
            .zip(bundle.paper_embeddings.view().outer_iter())
            .map(|(p, r)| (p.id.as_str(), r.to_vec())),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, body: &str) {
        fs::write(dir.join(name), body).unwrap();
    }

    fn minimal(dir: &Path) {
        write(
            dir,
            CLAIMS_JSONL,
            r#"{"id":"c1","text":"Zinc helps","article_id":"a1"}"#,
        );
        write(dir, CLAIMS_CSV, "id,v0,v1\nc1,1,0\n");
        write(dir, PAPERS_JSONL, r#"{"id":"p1","title":"Zinc trial"}"#);
        write(dir, PAPERS_CSV, "id,v0,v1\np1,0.5,0.5\n");
        write(
            dir,
            ARTICLES_JSONL,
            r#"{"id":"a1","outlet":"daily","paper_ids":["p1"]}"#,
        );
    }

    #[test]
    fn minimal_fixture() {
        let dir = tempfile::tempdir().unwrap();
        minimal(dir.path());
        let b = load_corpus_dir(dir.path()).unwrap();
        assert_eq!(b.links.view(), ndarray::array![[1.0]]);
        assert_eq!(b.claims[0].outlet, "daily");
        assert_eq!(b.articles[0].claim_ids, vec!["c1".to_string()]);
        assert!(b.postings.is_empty());
    }

    #[test]
    fn dangling_paper() {
        let dir = tempfile::tempdir().unwrap();
        minimal(dir.path());
        write(
            dir.path(),
            ARTICLES_JSONL,
            r#"{"id":"a1","outlet":"daily","paper_ids":["p9"]}"#,
        );
        let err = load_corpus_dir(dir.path()).unwrap_err();
        assert!(matches!(&err, Error::DanglingReference { id, .. } if id == "p9"));
        assert!(err.to_string().contains("dangling reference"));
    }

    #[test]
    fn dangling_posting_target_and_dim_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        minimal(dir.path());
        write(
            dir.path(),
            POSTINGS_JSONL,
            r#"{"id":"s1","target_sentence_ids":["c7"]}"#,
        );
        assert!(matches!(
            load_corpus_dir(dir.path()),
            Err(Error::DanglingReference { .. })
        ));
        fs::remove_file(dir.path().join(POSTINGS_JSONL)).unwrap();
        write(dir.path(), PAPERS_CSV, "id,v0\np1,0.5\n");
        assert!(matches!(
            load_corpus_dir(dir.path()),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn shuffled_files_load_identically() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        write(a.path(), CLAIMS_JSONL, "{\"id\":\"c1\",\"text\":\"x\",\"article_id\":\"a1\"}\n{\"id\":\"c2\",\"text\":\"y\",\"article_id\":\"a2\"}\n");
        write(b.path(), CLAIMS_JSONL, "{\"id\":\"c2\",\"text\":\"y\",\"article_id\":\"a2\"}\n{\"id\":\"c1\",\"text\":\"x\",\"article_id\":\"a1\"}\n");
        write(a.path(), CLAIMS_CSV, "id,v0\nc1,1\nc2,2\n");
        write(b.path(), CLAIMS_CSV, "id,v0\nc2,2\nc1,1\n");
        write(a.path(), PAPERS_JSONL, "{\"id\":\"p1\"}\n{\"id\":\"p2\"}\n");
        write(b.path(), PAPERS_JSONL, "{\"id\":\"p2\"}\n{\"id\":\"p1\"}\n");
        write(a.path(), PAPERS_CSV, "id,v0\np1,3\np2,4\n");
        write(b.path(), PAPERS_CSV, "id,v0\np2,4\np1,3\n");
        write(
            a.path(),
            ARTICLES_JSONL,
            "{\"id\":\"a1\",\"paper_ids\":[\"p2\"]}\n{\"id\":\"a2\",\"paper_ids\":[\"p1\"]}\n",
        );
        write(
            b.path(),
            ARTICLES_JSONL,
            "{\"id\":\"a2\",\"paper_ids\":[\"p1\"]}\n{\"id\":\"a1\",\"paper_ids\":[\"p2\"]}\n",
        );
        let x = load_corpus_dir(a.path()).unwrap();
        let y = load_corpus_dir(b.path()).unwrap();
        assert_eq!(x, y);
        // byte-compare the re-serialized bundles
        let (sa, sb) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        save_corpus(&x, sa.path()).unwrap();
        save_corpus(&y, sb.path()).unwrap();
        for name in [
            CLAIMS_JSONL,
            CLAIMS_CSV,
            PAPERS_JSONL,
            PAPERS_CSV,
            ARTICLES_JSONL,
            POSTINGS_JSONL,
        ] {
            assert_eq!(
                fs::read(sa.path().join(name)).unwrap(),
                fs::read(sb.path().join(name)).unwrap()
            );
        }
        assert_eq!(x.links.view(), ndarray::array![[0.0, 1.0], [1.0, 0.0]]);
    }

    #[test]
    fn duplicate_ids_rejected() {
        let dir = tempfile::tempdir().unwrap();
        minimal(dir.path());
        write(
            dir.path(),
            PAPERS_JSONL,
            "{\"id\":\"p1\"}\n{\"id\":\"p1\"}\n",
        );
        assert!(load_corpus_dir(dir.path()).is_err());
    }
}
