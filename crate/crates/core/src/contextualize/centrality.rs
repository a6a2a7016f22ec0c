use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

/// Added to every edge length so no edge is free.
pub const LENGTH_EPSILON: f64 = 1e-6;

/// Relative tolerance under which two path lengths count as equal.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Path length of an edge with the given weight: heavy edges are short.
pub fn edge_length(weight: f64) -> f64 {
    1.0 - weight + LENGTH_EPSILON
}

pub(crate) fn same_length(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Dist(f64);

impl Eq for Dist {}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Directed,
    /// Edges are traversable both ways; each unordered node pair counts once.
    Undirected,
}

/// Weighted edge betweenness of a simple graph given as `(source, target,
/// length)` triples with positive lengths: for every edge, the sum over node
/// pairs of the fraction of shortest paths between them that use it.
/// Scores are raw pair counts, not normalized.
pub fn edge_betweenness(
    n_nodes: usize,
    edges: &[(usize, usize, f64)],
    direction: Direction,
) -> Vec<f64> {
    let mut adj: Vec<Vec<(usize, f64, usize)>> = vec![Vec::new(); n_nodes];
    for (e, &(s, t, len)) in edges.iter().enumerate() {
        debug_assert!(len > 0.0, "edge lengths must be positive");
        adj[s].push((t, len, e));
        if direction == Direction::Undirected {
            adj[t].push((s, len, e));
        }
    }
    let mut score = vec![0.0; edges.len()];
    let mut dist = vec![f64::INFINITY; n_nodes];
    let mut sigma = vec![0.0f64; n_nodes];
    let mut delta = vec![0.0f64; n_nodes];
    let mut preds: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_nodes];
    let mut settled = vec![false; n_nodes];

    for source in 0..n_nodes {
        dist.fill(f64::INFINITY);
        sigma.fill(0.0);
        delta.fill(0.0);
        settled.fill(false);
        preds.iter_mut().for_each(Vec::clear);
        let mut order = Vec::new();
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        sigma[source] = 1.0;
        heap.push(Reverse((Dist(0.0), source)));
        while let Some(Reverse((Dist(d), v))) = heap.pop() {
            if settled[v] || d > dist[v] {
                continue;
            }
            settled[v] = true;
            order.push(v);
            for &(w, len, e) in &adj[v] {
                if settled[w] {
                    continue;
                }
                let alt = dist[v] + len;
                if dist[w].is_finite() && same_length(alt, dist[w]) {
                    sigma[w] += sigma[v];
                    preds[w].push((v, e));
                } else if alt < dist[w] {
                    dist[w] = alt;
                    sigma[w] = sigma[v];
                    preds[w].clear();
                    preds[w].push((v, e));
                    heap.push(Reverse((Dist(alt), w)));
                }
            }
        }
        for &w in order.iter().rev() {
            for &(v, e) in &preds[w] {
                let c = sigma[v] / sigma[w] * (1.0 + delta[w]);
                score[e] += c;
                delta[v] += c;
            }
        }
    }
    if direction == Direction::Undirected {
        // every pair was visited from both ends
        score.iter_mut().for_each(|x| *x /= 2.0);
    }
    score
}

/// Collapses parallel edges to their heaviest copy. Returns the simple edges
/// in `(source, target)` order and, for every input edge, its simple edge.
/// Undirected collapsing also merges `(a, b)` with `(b, a)`.
pub fn collapse_parallel(
    edges: &[(usize, usize, f64)],
    direction: Direction,
) -> (Vec<(usize, usize, f64)>, Vec<usize>) {
    let key = |s: usize, t: usize| match direction {
        Direction::Directed => (s, t),
        Direction::Undirected => (s.min(t), s.max(t)),
    };
    let mut best: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for &(s, t, w) in edges {
        let slot = best.entry(key(s, t)).or_insert(w);
        *slot = slot.max(w);
    }
    let position: BTreeMap<(usize, usize), usize> =
        best.keys().enumerate().map(|(i, &k)| (k, i)).collect();
    let simple = best.into_iter().map(|((s, t), w)| (s, t, w)).collect();
    let map = edges
        .iter()
        .map(|&(s, t, _)| position[&key(s, t)])
        .collect();
    (simple, map)
}
