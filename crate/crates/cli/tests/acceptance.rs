//! Acceptance suite. Each test prints one `criterion N ... PASS|FAIL` line
//! straight to stderr so the verdicts show without `--nocapture`.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write as _;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use ndarray::Array2;
use rand::Rng as _;
use sciclaim_core::content::{ContentAlgorithm, ContentModelChoice};
use sciclaim_core::contextualize::{
    assemble_context, edge_betweenness, edge_length, edge_weight, link_verified, reputation_score,
    scale_popularity, Direction, Label, VerifiedClaim, NEUTRAL_REPUTATION,
};
use sciclaim_core::extract::{
    context_heuristic, grammar_heuristic, AnnotatedSentence, EntityClass, EntitySpan, Lexicon,
    PostingRecord,
};
use sciclaim_core::graph::{
    fit_gba, fit_gbt, random_memberships, GbaObjective, GbtObjective, GraphFamily, GraphVariant,
    MlpTransform, Optimized, DEFAULT_HIDDEN_DIM,
};
use sciclaim_core::hybrid::{fit_ao, AoPreset, Block, HybridBlockObjective};
use sciclaim_core::io::{generate_synthetic, SynthParams};
use sciclaim_core::metrics::{modified_asw, recall_at_k, recommend, Side};
use sciclaim_core::optim::Objective;
use sciclaim_core::pipeline::{run_model, ModelSpec};
use sciclaim_core::records::{ClaimMeta, PaperRecord};
use sciclaim_core::rng::substream;
use sciclaim_core::{frobenius_norm, ClusterMatrix, EmbeddingMatrix, LinkMatrix, RunConfig};

use common::{sciclaim_ok, snapshot, write_extract_fixture, write_ibuprofen_corpus};

type Snapshot = (Vec<(String, Vec<u8>)>, Vec<Vec<u8>>);

/// Runs `body`, prints the verdict line and re-raises any failure.
fn criterion(n: u32, name: &str, budget: Duration, body: impl FnOnce() -> String) {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let mut err = std::io::stderr().lock();
    match result {
        Ok(detail) if elapsed <= budget => {
            let _ = writeln!(
                err,
                "criterion {n:>2} {name} ... PASS ({detail}; {elapsed:.2?})"
            );
        }
        Ok(detail) => {
            let _ = writeln!(err, "criterion {n:>2} {name} ... FAIL (over budget {budget:?}: {elapsed:.2?}; {detail})");
            drop(err);
            panic!("criterion {n} exceeded its runtime budget");
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            let _ = writeln!(err, "criterion {n:>2} {name} ... FAIL ({msg})");
            drop(err);
            resume_unwind(payload);
        }
    }
}

fn gauss(rng: &mut impl rand::Rng) -> f64 {
    rand_distr::Distribution::sample(&rand_distr::StandardNormal, rng)
}

fn random_cluster_matrix(rows: usize, k: usize, rng: &mut impl rand::Rng) -> ClusterMatrix {
    let mut m = Array2::from_shape_simple_fn((rows, k), || rng.random_range(0.05..1.0));
    for mut row in m.rows_mut() {
        let s = row.sum();
        row /= s;
    }
    ClusterMatrix::soft(m).unwrap()
}

fn random_links(claims: usize, papers: usize, rng: &mut impl rand::Rng) -> LinkMatrix {
    loop {
        let l = Array2::from_shape_simple_fn((claims, papers), || {
            if rng.random_bool(0.4) {
                1.0
            } else {
                0.0
            }
        });
        if l.sum() > 0.0 {
            return LinkMatrix::new(l).unwrap();
        }
    }
}

fn random_embeddings(rows: usize, dim: usize, rng: &mut impl rand::Rng) -> EmbeddingMatrix {
    EmbeddingMatrix::new(Array2::from_shape_simple_fn((rows, dim), || gauss(rng))).unwrap()
}

/// Relative error of the analytic gradient against central differences.
fn gradient_error(obj: &dyn Objective, x: &[f64]) -> f64 {
    let h = 1e-5;
    let (_, analytic) = obj.value_and_gradient(x);
    let mut probe = x.to_vec();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let up = obj.value(&probe);
        probe[i] = x[i] - h;
        let down = obj.value(&probe);
        probe[i] = x[i];
        let fd = (up - down) / (2.0 * h);
        num += (analytic[i] - fd).powi(2);
        den += fd.powi(2);
    }
    num.sqrt() / den.sqrt().max(1e-12)
}

#[test]
fn c01_worked_example() {
    criterion(1, "worked example", Duration::from_secs(1), || {
        let links = LinkMatrix::from_pairs(1, 2, &[(0, 0), (0, 1)]).unwrap();
        let papers =
            ClusterMatrix::soft(ndarray::array![[0.5, 0.1, 0.4], [0.1, 0.8, 0.1]]).unwrap();
        let rec = &recommend(&links, &papers, Side::Claims).unwrap()[0];
        assert_eq!(rec.scores, vec![0.6, 0.9, 0.5]);
        assert_eq!(rec.ranking, vec![1, 0, 2]);
        format!("scores {:?}, ranking {:?}", rec.scores, rec.ranking)
    });
}

/// Every row of `k` entries from the grid {0, 0.1, ..., 1} summing to one.
fn grid_rows(k: usize) -> Vec<Vec<f64>> {
    fn go(k: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<f64>>) {
        if prefix.len() == k - 1 {
            prefix.push(left);
            out.push(prefix.iter().map(|&t| f64::from(t) / 10.0).collect());
            prefix.pop();
            return;
        }
        for t in 0..=left {
            prefix.push(t);
            go(k, left - t, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, 10, &mut Vec::new(), &mut out);
    out
}

#[test]
fn c02_frobenius_bounds() {
    criterion(2, "Frobenius bounds", Duration::from_secs(10), || {
        let mut checked = 0usize;
        for r in 1..=3usize {
            for k in 1..=3usize {
                let rows = grid_rows(k);
                let uniform = frobenius_norm(ClusterMatrix::uniform(r, k).view());
                let one_hot =
                    frobenius_norm(ClusterMatrix::from_labels(&vec![0; r], k).unwrap().view());
                let mut idx = vec![0usize; r];
                loop {
                    let data = Array2::from_shape_fn((r, k), |(i, j)| rows[idx[i]][j]);
                    let m = ClusterMatrix::soft(data).unwrap();
                    let norm = frobenius_norm(m.view());
                    assert!(
                        uniform <= norm,
                        "R={r} K={k}: {norm} below uniform {uniform}"
                    );
                    assert!(
                        norm <= one_hot,
                        "R={r} K={k}: {norm} above one-hot {one_hot}"
                    );
                    checked += 1;
                    // odometer over row choices
                    let mut pos = 0;
                    while pos < r {
                        idx[pos] += 1;
                        if idx[pos] < rows.len() {
                            break;
                        }
                        idx[pos] = 0;
                        pos += 1;
                    }
                    if pos == r {
                        break;
                    }
                }
            }
        }
        format!("{checked} matrices")
    });
}

#[test]
fn c03_gradient_check() {
    criterion(3, "gradient check", Duration::from_secs(30), || {
        let mut worst: f64 = 0.0;
        for instance in 0..20u64 {
            let mut rng = substream(instance, "acceptance/gradients");
            let n_claims = rng.random_range(2..=6);
            let n_papers = rng.random_range(2..=5);
            let k = 3;
            let dim = 4;
            let beta = 0.3;
            let links = random_links(n_claims, n_papers, &mut rng);
            let claims_x = random_embeddings(n_claims, dim, &mut rng);
            let papers_x = random_embeddings(n_papers, dim, &mut rng);
            let c = random_cluster_matrix(n_claims, k, &mut rng);
            let p = random_cluster_matrix(n_papers, k, &mut rng);
            for variant in GraphVariant::ALL {
                let opt = variant.optimized;
                let err = match variant.family {
                    GraphFamily::Gba => {
                        let obj = GbaObjective::new(&links, opt, beta, &c, &p).unwrap();
                        let x = obj.pack(&c, &p);
                        gradient_error(&obj, &x)
                    }
                    GraphFamily::Gbt => {
                        let tc = MlpTransform::random(dim, DEFAULT_HIDDEN_DIM, k, &mut rng);
                        let tp = MlpTransform::random(dim, DEFAULT_HIDDEN_DIM, k, &mut rng);
                        let obj = GbtObjective::new(
                            opt,
                            &claims_x,
                            &papers_x,
                            &links,
                            (!opt.claims()).then_some(&c),
                            (!opt.papers()).then_some(&p),
                            opt.claims().then_some(&tc),
                            opt.papers().then_some(&tp),
                            beta,
                        )
                        .unwrap();
                        let x = obj.pack();
                        gradient_error(&obj, &x)
                    }
                };
                assert!(
                    err < 1e-4,
                    "instance {instance} {variant}: relative error {err:e}"
                );
                worst = worst.max(err);
            }
            let c0 = random_cluster_matrix(n_claims, k, &mut rng);
            let p0 = random_cluster_matrix(n_papers, k, &mut rng);
            for gamma in [0.1, 0.5, 0.9] {
                for block in [Block::Claims, Block::Papers] {
                    let (frozen, rows) = match block {
                        Block::Claims => (p.view(), n_claims),
                        Block::Papers => (c.view(), n_papers),
                    };
                    let obj =
                        HybridBlockObjective::new(block, &links, frozen, &c0, &p0, gamma).unwrap();
                    let x: Vec<f64> = (0..rows * k).map(|_| gauss(&mut rng)).collect();
                    let err = gradient_error(&obj, &x);
                    assert!(
                        err < 1e-4,
                        "instance {instance} hybrid {block:?} gamma {gamma}: {err:e}"
                    );
                    worst = worst.max(err);
                }
            }
        }
        format!("worst relative error {worst:.1e}")
    });
}

#[test]
fn c04_planted_recovery() {
    criterion(4, "planted recovery", Duration::from_secs(120), || {
        let params = SynthParams {
            n_clusters: 5,
            n_claims: 200,
            n_papers: 100,
            dim: 16,
            noise: 0.5,
            link_noise: 0.05,
            seed: 0,
        };
        let corpus = generate_synthetic(&params).unwrap();
        let b = &corpus.bundle;
        let cfg = RunConfig {
            n_clusters: 5,
            ..RunConfig::default()
        };
        let init = ContentModelChoice::plain(ContentAlgorithm::Kmeans);
        let run = |spec| {
            run_model(
                spec,
                &b.claim_embeddings,
                &b.paper_embeddings,
                &b.links,
                init,
                &cfg,
            )
            .unwrap()
        };
        let asw = |c: &ClusterMatrix, p: &ClusterMatrix| {
            modified_asw(&b.claim_embeddings, &b.paper_embeddings, c, p).unwrap()
        };

        let mut rng = substream(0, "acceptance/random-assignment");
        let mut random_labels =
            |n: usize| -> Vec<usize> { (0..n).map(|_| rng.random_range(0..5)).collect() };
        let rc = ClusterMatrix::from_labels(&random_labels(200), 5).unwrap();
        let rp = ClusterMatrix::from_labels(&random_labels(100), 5).unwrap();
        let asw_random = asw(&rc, &rp);

        let km = run(ModelSpec::Content(ContentAlgorithm::Kmeans));
        let asw_km = asw(&km.claims, &km.papers);
        assert!(
            asw_km >= asw_random + 0.1,
            "k-means ASW {asw_km} vs random {asw_random}"
        );

        let gba = run(ModelSpec::Graph(GraphVariant::new(
            GraphFamily::Gba,
            Optimized::CP,
        )));
        let r3_gba = recall_at_k(&gba.claims, &gba.papers, &b.links, 3).unwrap();
        assert!(r3_gba >= 0.99, "GBA-CP R@3 {r3_gba}");

        let ao = run(ModelSpec::Ao(AoPreset::Balanced));
        let r3_ao = recall_at_k(&ao.claims, &ao.papers, &b.links, 3).unwrap();
        let asw_ao = asw(&ao.claims, &ao.papers);
        assert!(r3_ao >= 0.95, "AO-Balanced R@3 {r3_ao}");
        assert!(
            (asw_ao - asw_km).abs() <= 0.05,
            "AO-Balanced ASW {asw_ao} vs k-means {asw_km}"
        );

        format!(
            "ASW k-means {asw_km:.3} random {asw_random:.3}; R@3 GBA-CP {r3_gba:.3}; AO-Balanced R@3 {r3_ao:.3} ASW {asw_ao:.3}"
        )
    });
}

#[test]
fn c05_descent_contracts() {
    criterion(5, "descent contracts", Duration::from_secs(60), || {
        let non_increasing = |trace: &[f64]| trace.windows(2).all(|w| w[1] <= w[0]);
        let mut traces = 0usize;
        for seed in 0..10u64 {
            let mut rng = substream(seed, "acceptance/descent");
            let (n_claims, n_papers, k) = (12, 8, 3);
            let links = random_links(n_claims, n_papers, &mut rng);
            let claims_x = random_embeddings(n_claims, 4, &mut rng);
            let papers_x = random_embeddings(n_papers, 4, &mut rng);
            let cfg = RunConfig {
                n_clusters: k,
                max_iters: 200,
                seed,
                ..RunConfig::default()
            };
            let c0 = random_memberships(n_claims, k, seed, "acceptance/c0");
            let p0 = random_memberships(n_papers, k, seed, "acceptance/p0");
            for opt in [Optimized::CP, Optimized::C, Optimized::P] {
                let fit = fit_gba(opt, &links, &c0, &p0, &cfg).unwrap();
                assert!(non_increasing(&fit.trace), "seed {seed} gba {opt:?}");
                let fit = fit_gbt(
                    opt,
                    &claims_x,
                    &papers_x,
                    &links,
                    (!opt.claims()).then_some(&c0),
                    (!opt.papers()).then_some(&p0),
                    &cfg,
                )
                .unwrap();
                assert!(non_increasing(&fit.trace), "seed {seed} gbt {opt:?}");
                traces += 2;
            }
            for gamma in [0.0, 0.1, 0.5, 0.9, 1.0] {
                let fit = fit_ao(&c0, &p0, &links, gamma, &cfg).unwrap();
                assert!(non_increasing(&fit.trace), "seed {seed} ao gamma {gamma}");
                traces += 1;
                if gamma == 0.0 {
                    let dc = (&fit.claims.view() - &c0.view())
                        .iter()
                        .fold(0.0f64, |m, v| m.max(v.abs()));
                    let dp = (&fit.papers.view() - &p0.view())
                        .iter()
                        .fold(0.0f64, |m, v| m.max(v.abs()));
                    assert!(
                        dc.max(dp) <= 1e-6,
                        "seed {seed}: gamma 0 moved by {}",
                        dc.max(dp)
                    );
                }
            }
        }
        format!("{traces} non-increasing traces")
    });
}

#[test]
fn c06_weighting_arithmetic() {
    criterion(6, "weighting arithmetic", Duration::from_secs(1), || {
        assert_eq!(edge_weight(1.0, 0.0, 0.4), 1.0);
        assert_eq!(edge_weight(0.0, 1.0, 0.4), 0.0);
        assert_eq!(edge_weight(0.5, 0.5, 0.4), 0.5);
        let e = std::f64::consts::E;
        let raws = vec![
            ("a".to_string(), 0.0),
            ("b".to_string(), e - 1.0),
            ("c".to_string(), e * e - 1.0),
        ];
        let pop = scale_popularity(&raws);
        for (id, want) in [("a", 0.0), ("b", 0.5), ("c", 1.0)] {
            assert!(
                (pop[id] - want).abs() <= 1e-12,
                "popularity of {id}: {}",
                pop[id]
            );
        }
        let claim = ClaimMeta {
            id: "c".into(),
            text: "t".into(),
            entities: vec![],
            embedding: vec![1.0],
            posting_ids: BTreeSet::new(),
            article_id: "a".into(),
            outlet: "nowhere".into(),
        };
        let outlets = BTreeMap::from([("known".to_string(), 0.9)]);
        assert_eq!(reputation_score(&claim, &outlets), NEUTRAL_REPUTATION);
        assert_eq!(NEUTRAL_REPUTATION, 0.5);
        "edge weights, popularity scaling and neutral reputation".into()
    });
}

/// Exhaustive oracle: enumerates every simple path of the undirected graph.
fn brute_force_betweenness(n: usize, edges: &[(usize, usize, f64)]) -> Vec<f64> {
    let mut adj: Vec<Vec<(usize, f64, usize)>> = vec![Vec::new(); n];
    for (e, &(a, b, len)) in edges.iter().enumerate() {
        adj[a].push((b, len, e));
        adj[b].push((a, len, e));
    }
    fn paths(
        v: usize,
        goal: usize,
        adj: &[Vec<(usize, f64, usize)>],
        seen: &mut [bool],
        used: &mut Vec<usize>,
        len: f64,
        out: &mut Vec<(f64, Vec<usize>)>,
    ) {
        if v == goal {
            out.push((len, used.clone()));
            return;
        }
        for &(w, l, e) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                used.push(e);
                paths(w, goal, adj, seen, used, len + l, out);
                used.pop();
                seen[w] = false;
            }
        }
    }
    let mut score = vec![0.0; edges.len()];
    for s in 0..n {
        for t in s + 1..n {
            let mut all = Vec::new();
            let mut seen = vec![false; n];
            seen[s] = true;
            paths(s, t, &adj, &mut seen, &mut Vec::new(), 0.0, &mut all);
            let best = all.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
            let shortest: Vec<_> = all
                .iter()
                .filter(|p| (p.0 - best).abs() <= 1e-9 * best)
                .collect();
            for (_, used) in &shortest {
                for &e in used {
                    score[e] += 1.0 / shortest.len() as f64;
                }
            }
        }
    }
    score
}

fn connected(n: usize, edges: &[(usize, usize, f64)]) -> bool {
    let mut reach = vec![false; n];
    reach[0] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for &(a, b, _) in edges {
            if reach[a] != reach[b] {
                reach[a] = true;
                reach[b] = true;
                changed = true;
            }
        }
    }
    reach.iter().all(|&r| r)
}

#[test]
fn c07_centrality_oracle() {
    criterion(7, "centrality oracle", Duration::from_secs(30), || {
        let n = 5;
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        // weights from a small set so that equal-length alternatives occur
        let levels = [0.2, 0.5, 0.5, 0.8, 1.0];
        let mut rng = substream(0, "acceptance/centrality");
        let mut graphs = 0usize;
        let mut worst: f64 = 0.0;
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<(usize, usize, f64)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &(a, b))| (a, b, edge_length(levels[rng.random_range(0..levels.len())])))
                .collect();
            if !connected(n, &edges) {
                continue;
            }
            graphs += 1;
            let fast = edge_betweenness(n, &edges, Direction::Undirected);
            let slow = brute_force_betweenness(n, &edges);
            for (a, b) in fast.iter().zip(&slow) {
                let d = (a - b).abs();
                assert!(d <= 1e-9, "graph mask {mask:#x}: {fast:?} vs {slow:?}");
                worst = worst.max(d);
            }
        }
        assert_eq!(graphs, 728, "connected labelled graphs on 5 nodes");
        format!("{graphs} graphs, max difference {worst:.1e}")
    });
}

fn posting(id: &str, embedding: Vec<f64>, reposts: u64, targets: &[&str]) -> PostingRecord {
    PostingRecord {
        id: id.into(),
        text: String::new(),
        embedding,
        reposts,
        likes: 0,
        target_sentence_ids: targets.iter().map(|s| s.to_string()).collect(),
    }
}

#[test]
fn c08_heuristic_extractors() {
    criterion(8, "heuristic extractors", Duration::from_secs(1), || {
        let lex = Lexicon::new(["suggest", "claim"], ["study", "researcher"]).unwrap();
        let mut rows = 0;
        for root_rv in [false, true] {
            for nsubj_e in [false, true] {
                for dobj_e in [false, true] {
                    // the subject enters E through a Person mention on one row
                    let person_subject = root_rv && nsubj_e && !dobj_e;
                    let (text, nsubj, entities) = if person_subject {
                        (
                            "Smith eats fish",
                            "Smith",
                            vec![EntitySpan {
                                start: 0,
                                end: 5,
                                class: EntityClass::Person,
                            }],
                        )
                    } else if nsubj_e {
                        ("a study", "study", vec![])
                    } else {
                        ("a cat", "cat", vec![])
                    };
                    let s = AnnotatedSentence {
                        id: format!("s{rows}"),
                        text: text.into(),
                        root_verb: if root_rv { "suggest" } else { "eat" }.into(),
                        nsubj: Some(nsubj.into()),
                        dobj: Some(if dobj_e { "researcher" } else { "apple" }.into()),
                        entities,
                        embedding: None,
                    };
                    let want = root_rv && (nsubj_e || dobj_e);
                    assert_eq!(
                        grammar_heuristic(&s, &lex),
                        want,
                        "row rv={root_rv} nsubj={nsubj_e} dobj={dobj_e}"
                    );
                    rows += 1;
                }
            }
        }
        // hand-computed max over postings of cosine times popularity share
        let fixtures: [(&str, Vec<PostingRecord>, bool); 5] = [
            (
                "lone identical posting: 1 × 1",
                vec![posting("p", vec![1.0, 0.0], 5, &["s"])],
                true,
            ),
            (
                "boundary: 1 × 9/10 = 0.9",
                vec![
                    posting("p", vec![1.0, 0.0], 9, &["s"]),
                    posting("q", vec![0.0, 1.0], 1, &["s"]),
                ],
                true,
            ),
            (
                "just below: 1 × 89/100",
                vec![
                    posting("p", vec![1.0, 0.0], 89, &["s"]),
                    posting("q", vec![0.0, 1.0], 11, &["s"]),
                ],
                false,
            ),
            (
                "orthogonal posting: 0 × 1",
                vec![posting("p", vec![0.0, 1.0], 10, &["s"])],
                false,
            ),
            (
                "posting about another sentence",
                vec![posting("p", vec![1.0, 0.0], 10, &["other"])],
                false,
            ),
        ];
        for (name, postings, want) in &fixtures {
            assert_eq!(
                context_heuristic(&[1.0, 0.0], "s", postings, 0.9).unwrap(),
                *want,
                "{name}"
            );
        }
        format!(
            "{rows} truth-table rows, {} context fixtures",
            fixtures.len()
        )
    });
}

fn claim_with_entities(embedding: Vec<f64>) -> ClaimMeta {
    let text = "Alice told Bob";
    ClaimMeta {
        id: "c".into(),
        text: text.into(),
        entities: vec![
            EntitySpan {
                start: 0,
                end: 5,
                class: EntityClass::Person,
            },
            EntitySpan {
                start: 11,
                end: 14,
                class: EntityClass::Person,
            },
        ],
        embedding,
        posting_ids: BTreeSet::new(),
        article_id: "a0".into(),
        outlet: String::new(),
    }
}

fn verified(text: &str, embedding: Vec<f64>, entities: &[&str]) -> VerifiedClaim {
    VerifiedClaim {
        text: text.into(),
        label: Label::False,
        embedding,
        entities: entities.iter().map(|s| s.to_string()).collect(),
    }
}

#[test]
fn c09_sts_linking() {
    criterion(9, "STS linking", Duration::from_secs(1), || {
        let claim = claim_with_entities(vec![1.0, 0.0]);
        let same = verified("same", vec![1.0, 0.0], &["alice", "bob"]);
        let unrelated = verified("unrelated", vec![0.0, 1.0], &["carol"]);
        let half = verified("half", vec![2.0, 0.0], &["alice"]);
        let m = link_verified(&claim, &[same], 0.9).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].sts, 1.0);
        assert!(link_verified(&claim, &[unrelated], 0.9).unwrap().is_empty());
        // 0.5 · 1 + 0.5 · |{alice}| / |{alice, bob}|
        assert!(link_verified(&claim, std::slice::from_ref(&half), 0.9)
            .unwrap()
            .is_empty());
        assert_eq!(link_verified(&claim, &[half], 0.75).unwrap()[0].sts, 0.75);

        // five papers and five passing verified claims at distinct angles
        let angles = [0.05, 0.30, 0.10, 0.40, 0.20];
        let plain = ClaimMeta {
            entities: vec![],
            ..claim.clone()
        };
        let papers: Vec<PaperRecord> = angles
            .iter()
            .enumerate()
            .map(|(i, &a)| PaperRecord {
                id: format!("p{i}"),
                title: String::new(),
                embedding: vec![f64::cos(a), f64::sin(a)],
            })
            .collect();
        let db: Vec<VerifiedClaim> = angles
            .iter()
            .enumerate()
            .map(|(i, &a)| verified(&format!("v{i}"), vec![f64::cos(a), f64::sin(a)], &[]))
            .collect();
        let bundle =
            assemble_context(&plain, std::slice::from_ref(&plain), &papers, &db, 3, 0.9).unwrap();
        // sort oracle: the cosine to (1, 0) is cos(angle)
        let mut oracle: Vec<(usize, f64)> =
            angles.iter().map(|&a| f64::cos(a)).enumerate().collect();
        oracle.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        oracle.truncate(3);
        let want_papers: Vec<String> = oracle.iter().map(|(i, _)| format!("p{i}")).collect();
        let want_verified: Vec<String> = oracle.iter().map(|(i, _)| format!("v{i}")).collect();
        let got_papers: Vec<String> = bundle.papers.iter().map(|p| p.id.clone()).collect();
        let got_verified: Vec<String> = bundle.verified.iter().map(|v| v.text.clone()).collect();
        assert_eq!(got_papers, want_papers);
        assert_eq!(got_verified, want_verified);
        for (item, (_, cos)) in bundle.papers.iter().zip(&oracle) {
            assert!((item.score - cos).abs() <= 1e-12);
        }
        assert_eq!(bundle.articles[0].id, "a0");
        format!("papers {got_papers:?}, verified {got_verified:?}")
    });
}

#[test]
fn c10_cli_determinism() {
    criterion(10, "CLI determinism", Duration::from_secs(120), || {
        let root = tempfile::tempdir().unwrap();
        let run = |name: &str| -> Snapshot {
            let dir = root.path().join(name);
            write_extract_fixture(&dir.join("extract"));
            write_ibuprofen_corpus(&dir.join("ibuprofen"));
            let mut stdout = Vec::new();
            let mut go = |args: &[&str]| stdout.push(sciclaim_ok(&dir, args).stdout);
            go(&[
                "extract",
                "--sentences",
                "extract/sentences.jsonl",
                "--verbs",
                "extract/verbs.txt",
                "--nouns",
                "extract/nouns.txt",
                "--postings",
                "extract/postings.jsonl",
            ]);
            go(&[
                "synth",
                "--out",
                "synth",
                "--clusters",
                "3",
                "--claims",
                "60",
                "--papers",
                "30",
                "--seed",
                "7",
            ]);
            let models = [
                "kmeans",
                "gmm",
                "gba-cp",
                "gba-c",
                "gbt-p",
                "ao-balanced",
                "ao",
            ];
            for m in models {
                go(&[
                    "cluster",
                    "--corpus",
                    "synth",
                    "--model",
                    m,
                    "--out",
                    &format!("runs/{m}"),
                    "--clusters",
                    "3",
                    "--seed",
                    "7",
                    "--max-iters",
                    "200",
                ]);
            }
            let mut eval = vec![
                "evaluate",
                "--corpus",
                "synth",
                "--out",
                "eval.tsv",
                "--clusters",
                "3",
                "--assignments",
            ];
            let dirs: Vec<String> = models.iter().map(|m| format!("runs/{m}")).collect();
            eval.extend(dirs.iter().map(String::as_str));
            go(&eval);
            let ranked = [
                "--corpus",
                "synth",
                "--vocab",
                "synth/vocab.tsv",
                "--outlets",
                "synth/outlets.tsv",
                "--assignments",
                "runs/ao-balanced",
            ];
            let mut rank = vec!["rank", "--out", "rank.json"];
            rank.extend(ranked);
            go(&rank);
            let mut aspect = vec![
                "rank",
                "--out",
                "aspect.json",
                "--topology",
                "aspect",
                "--focal",
                "disease-0",
            ];
            aspect.extend(ranked);
            go(&aspect);
            let mut context = vec![
                "context",
                "--out",
                "context",
                "--verified",
                "synth/verified.jsonl",
            ];
            context.extend(ranked);
            go(&context);
            go(&[
                "rank",
                "--corpus",
                "ibuprofen",
                "--vocab",
                "ibuprofen/vocab.tsv",
                "--out",
                "ibuprofen.json",
            ]);
            (snapshot(&dir), stdout)
        };
        let (files_a, out_a) = run("first");
        let (files_b, out_b) = run("second");
        assert_eq!(files_a.len(), files_b.len());
        for ((pa, ca), (pb, cb)) in files_a.iter().zip(&files_b) {
            assert_eq!(pa, pb);
            assert!(ca == cb, "{pa} differs between runs");
        }
        assert!(out_a == out_b, "stdout differs between runs");
        format!(
            "{} files and {} stdout streams identical",
            files_a.len(),
            out_a.len()
        )
    });
}
