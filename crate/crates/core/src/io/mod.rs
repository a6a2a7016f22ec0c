//! File formats, corpus loading and synthetic corpora.

mod clusters;
mod corpus;
mod files;
mod synth;

pub use clusters::{load_clusters, save_clusters};
pub use corpus::{
    load_corpus, load_corpus_dir, save_corpus, CorpusBundle, CorpusPaths, ARTICLES_JSONL,
    CLAIMS_CSV, CLAIMS_JSONL, PAPERS_CSV, PAPERS_JSONL, POSTINGS_JSONL,
};
pub use files::{
    read_id_matrix, read_jsonl, read_outlets, read_vocabulary, write_id_matrix, write_jsonl,
    write_outlets, write_vocabulary,
};
pub use synth::{generate_synthetic, SynthParams, SyntheticCorpus};
