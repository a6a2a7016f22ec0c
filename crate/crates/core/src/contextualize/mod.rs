//! Check-worthiness ranking over term co-occurrence graphs and assembly of
//! fact-checking context for the top claims.

mod anonymize;
pub mod centrality;
mod kg;
mod link;
mod rank;
mod weighting;

pub use anonymize::{anonymize_claim, ORGANIZATION_PLACEHOLDER, PERSON_PLACEHOLDER};
pub use centrality::{collapse_parallel, edge_betweenness, edge_length, Direction};
pub use kg::{
    build_graph, tokenize, KgEdge, KnowledgeGraph, TermClass, Topology, Vocabulary, VocabularyTerm,
};
pub use link::{
    assemble_context, link_verified, sts, ContextBundle, Label, ScoredItem, VerifiedClaim,
    VerifiedMatch, DEFAULT_CONTEXT_SIZE, DEFAULT_LINK_THRESHOLD,
};
pub use rank::{rank, rank_aspect, rank_causality, RankedEdge};
pub use weighting::{
    claim_weights, edge_weight, popularity_score, raw_popularity, reputation_score,
    scale_popularity, DEFAULT_THETA, NEUTRAL_REPUTATION,
};
