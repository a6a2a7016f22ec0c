use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::centrality::{collapse_parallel, edge_betweenness, edge_length, Direction};
use super::kg::{KnowledgeGraph, Topology};
use crate::error::{invalid, Result};

/// One claim-carrying edge of a ranking report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEdge {
    pub source: String,
    pub target: String,
    pub claim_id: String,
    pub weight: f64,
    pub score: f64,
}

/// Edges by weighted edge betweenness, computed on the undirected graph with
/// parallel edges collapsed to their heaviest copy. Every parallel edge
/// inherits the score of its collapsed edge.
pub fn rank_causality(g: &KnowledgeGraph) -> Result<Vec<RankedEdge>> {
    if g.topology != Topology::Causality {
        return Err(invalid("betweenness ranking needs a causality graph"));
    }
    let triples: Vec<_> = g
        .edges
        .iter()
        .map(|e| (e.source, e.target, e.weight))
        .collect();
    let (simple, map) = collapse_parallel(&triples, Direction::Undirected);
    let lengths: Vec<_> = simple
        .iter()
        .map(|&(s, t, w)| (s, t, edge_length(w)))
        .collect();
    let bc = edge_betweenness(g.n_nodes(), &lengths, Direction::Undirected);
    let mut out: Vec<RankedEdge> = g
        .edges
        .iter()
        .zip(map)
        .map(|(e, i)| RankedEdge {
            source: g.term(e.source).to_string(),
            target: g.term(e.target).to_string(),
            claim_id: e.claim_id.clone(),
            weight: e.weight,
            score: bc[i],
        })
        .collect();
    out.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| (&a.source, &a.target).cmp(&(&b.source, &b.target)))
            .then_with(|| b.weight.total_cmp(&a.weight))
            .then_with(|| a.claim_id.cmp(&b.claim_id))
    });
    Ok(out)
}

/// Aspects of the focal term by weighted in-degree: each aspect scores the
/// summed weight of its edges into the focal node.
pub fn rank_aspect(g: &KnowledgeGraph) -> Result<Vec<RankedEdge>> {
    let Some(focal) = g
        .focal
        .filter(|_| matches!(g.topology, Topology::Aspect { .. }))
    else {
        return Err(invalid("in-degree ranking needs an aspect graph"));
    };
    let mut totals: BTreeMap<usize, f64> = BTreeMap::new();
    for e in g.edges.iter().filter(|e| e.target == focal) {
        *totals.entry(e.source).or_default() += e.weight;
    }
    let mut out: Vec<RankedEdge> = g
        .edges
        .iter()
        .filter(|e| e.target == focal)
        .map(|e| RankedEdge {
            source: g.term(e.source).to_string(),
            target: g.term(focal).to_string(),
            claim_id: e.claim_id.clone(),
            weight: e.weight,
            score: totals[&e.source],
        })
        .collect();
    out.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.source.cmp(&b.source))
            .then_with(|| b.weight.total_cmp(&a.weight))
            .then_with(|| a.claim_id.cmp(&b.claim_id))
    });
    Ok(out)
}

/// Ranking for whichever topology the graph has.
pub fn rank(g: &KnowledgeGraph) -> Result<Vec<RankedEdge>> {
    match g.topology {
        Topology::Causality => rank_causality(g),
        Topology::Aspect { .. } => rank_aspect(g),
    }
}
