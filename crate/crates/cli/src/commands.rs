use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use anyhow::{bail, Context as _, Result};
use serde::Serialize;

use sciclaim_core::content::{ContentAlgorithm, ContentModelChoice};
use sciclaim_core::contextualize::{
    assemble_context, build_graph, claim_weights, rank, ContextBundle, RankedEdge, Topology,
    VerifiedClaim, Vocabulary,
};
use sciclaim_core::extract::{
    context_score, AnnotatedSentence, GrammarBits, Lexicon, PostingRecord,
};
use sciclaim_core::io::{
    generate_synthetic, load_clusters, load_corpus_dir, read_jsonl, read_outlets, read_vocabulary,
    save_clusters, save_corpus, write_jsonl, write_outlets, write_vocabulary, CorpusBundle,
    SynthParams,
};
use sciclaim_core::metrics::{modified_asw, recall_at_k};
use sciclaim_core::pipeline::{cluster_members, run_model, ModelSpec, RunSummary};
use sciclaim_core::records::{ClaimMeta, PaperRecord};
use sciclaim_core::{ClusterMatrix, RunConfig};

use crate::{
    Cli, ClusterArgs, Command, ContextArgs, EvaluateArgs, ExtractArgs, Global, InitAlgorithm,
    RankArgs, RankInputs, SynthArgs, TopologyArg, UsageError,
};

const CLAIMS_CLUSTERS: &str = "claims.csv";
const PAPERS_CLUSTERS: &str = "papers.csv";
const META: &str = "meta.json";

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn run(cli: Cli) -> Result<()> {
    let cfg = config(&cli.global)?;
    match cli.command {
        Command::Extract(a) => extract(a),
        Command::Cluster(a) => cluster(a, cfg),
        Command::Evaluate(a) => evaluate(a, &cli.global),
        Command::Rank(a) => rank_cmd(a, &cli.global),
        Command::Context(a) => context(a, &cli.global),
        Command::Synth(a) => synth(a, &cli.global),
    }
}

fn config(g: &Global) -> Result<RunConfig> {
    let cfg = RunConfig {
        n_clusters: g.clusters,
        beta: g.beta,
        gamma: g.gamma,
        theta: g.theta,
        seed: g.seed,
        ..RunConfig::default()
    };
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    if g.k == 0 {
        return Err(usage("--k must be at least 1"));
    }
    Ok(cfg)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[derive(Serialize)]
struct ExtractRecord {
    id: String,
    grammar: bool,
    root_in_rv: bool,
    nsubj_in_e: bool,
    dobj_in_e: bool,
    context: Option<bool>,
    context_score: Option<f64>,
}

fn extract(a: ExtractArgs) -> Result<()> {
    if !(0.0..=1.0).contains(&a.threshold) {
        return Err(usage("--threshold must lie in [0, 1]"));
    }
    let sentences: Vec<AnnotatedSentence> = read_jsonl(&a.sentences)?;
    let lex = Lexicon::load(&a.verbs, &a.nouns)?;
    let postings: Option<Vec<PostingRecord>> = a.postings.as_deref().map(read_jsonl).transpose()?;
    let mut records = Vec::with_capacity(sentences.len());
    for s in &sentences {
        s.validate()?;
        let bits = GrammarBits::of(s, &lex);
        let (context, score) = match (&s.embedding, &postings) {
            (Some(e), Some(p)) => {
                let score = context_score(e, &s.id, p)?;
                (Some(score.is_some_and(|v| v >= a.threshold)), score)
            }
            _ => (None, None),
        };
        records.push(ExtractRecord {
            id: s.id.clone(),
            grammar: bits.verdict(),
            root_in_rv: bits.root_in_rv,
            nsubj_in_e: bits.nsubj_in_e,
            dobj_in_e: bits.dobj_in_e,
            context,
            context_score: score,
        });
    }
    match a.out {
        Some(path) => write_jsonl(&path, &records)?,
        None => {
            let mut out = std::io::stdout().lock();
            for r in &records {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
    }
    Ok(())
}

fn cluster(a: ClusterArgs, mut cfg: RunConfig) -> Result<()> {
    let spec: ModelSpec = a
        .model
        .parse()
        .map_err(|e: sciclaim_core::Error| usage(e.to_string()))?;
    if let Some(v) = a.max_iters {
        cfg.max_iters = v;
    }
    if let Some(v) = a.step_size {
        cfg.step_size = v;
    }
    if let Some(v) = a.tolerance {
        cfg.tolerance = v;
    }
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    let algorithm = match a.init {
        InitAlgorithm::Kmeans => ContentAlgorithm::Kmeans,
        InitAlgorithm::Gmm => ContentAlgorithm::Gmm,
    };
    let init = match a.pca {
        Some(d) => ContentModelChoice::with_pca(algorithm, d),
        None => ContentModelChoice::plain(algorithm),
    };
    let bundle = load_corpus_dir(&a.corpus)?;
    init.validate(bundle.claim_embeddings.dim())
        .map_err(|e| usage(e.to_string()))?;
    let out = run_model(
        spec,
        &bundle.claim_embeddings,
        &bundle.paper_embeddings,
        &bundle.links,
        init,
        &cfg,
    )?;
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let claim_ids: Vec<&str> = bundle.claims.iter().map(|c| c.id.as_str()).collect();
    let paper_ids: Vec<&str> = bundle.papers.iter().map(|p| p.id.as_str()).collect();
    save_clusters(&a.out.join(CLAIMS_CLUSTERS), &claim_ids, &out.claims)?;
    save_clusters(&a.out.join(PAPERS_CLUSTERS), &paper_ids, &out.papers)?;
    let summary = RunSummary::new(spec, &cfg, &out);
    write_json(&a.out.join(META), &summary)?;
    println!(
        "{}: {} claims, {} papers, {} clusters -> {}",
        summary.model,
        claim_ids.len(),
        paper_ids.len(),
        cfg.n_clusters,
        a.out.display()
    );
    Ok(())
}

/// Memberships from a `cluster` output directory, checked against the corpus ids.
fn load_assignments(dir: &Path, bundle: &CorpusBundle) -> Result<(ClusterMatrix, ClusterMatrix)> {
    let (claim_ids, claims) = load_clusters(&dir.join(CLAIMS_CLUSTERS))?;
    let (paper_ids, papers) = load_clusters(&dir.join(PAPERS_CLUSTERS))?;
    let same = |ids: &[String], want: &mut dyn Iterator<Item = &str>| {
        ids.iter().map(String::as_str).eq(want)
    };
    if !same(&claim_ids, &mut bundle.claims.iter().map(|c| c.id.as_str())) {
        bail!("claim ids in {} do not match the corpus", dir.display());
    }
    if !same(&paper_ids, &mut bundle.papers.iter().map(|p| p.id.as_str())) {
        bail!("paper ids in {} do not match the corpus", dir.display());
    }
    if claims.n_clusters() != papers.n_clusters() {
        bail!(
            "claims and papers in {} have different cluster counts",
            dir.display()
        );
    }
    Ok((claims, papers))
}

fn model_name(dir: &Path) -> String {
    fs::read_to_string(dir.join(META))
        .ok()
        .and_then(|t| serde_json::from_str::<RunSummary>(&t).ok())
        .map(|m| m.model)
        .unwrap_or_else(|| {
            dir.file_name()
                .map_or_else(|| dir.display().to_string(), |n| n.to_string_lossy().into())
        })
}

fn evaluate(a: EvaluateArgs, g: &Global) -> Result<()> {
    let bundle = load_corpus_dir(&a.corpus)?;
    let mut tsv = format!("model\tASW\tR@{}\n", g.k);
    for dir in &a.assignments {
        let (claims, papers) = load_assignments(dir, &bundle)?;
        let asw = modified_asw(
            &bundle.claim_embeddings,
            &bundle.paper_embeddings,
            &claims,
            &papers,
        )?;
        let recall = recall_at_k(&claims, &papers, &bundle.links, g.k)?;
        let _ = writeln!(tsv, "{}\t{asw:.6}\t{recall:.6}", model_name(dir));
    }
    print!("{tsv}");
    if let Some(path) = a.out {
        fs::write(&path, &tsv).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

struct Group {
    cluster: Option<usize>,
    claims: Vec<ClaimMeta>,
    papers: Vec<PaperRecord>,
    ranked: Vec<RankedEdge>,
}

fn ranked_groups(inputs: &RankInputs, g: &Global) -> Result<Vec<Group>> {
    let topology = match (inputs.topology, &inputs.focal) {
        (TopologyArg::Causality, _) => Topology::Causality,
        (TopologyArg::Aspect, Some(f)) => Topology::Aspect { focal: f.clone() },
        (TopologyArg::Aspect, None) => return Err(usage("--topology aspect needs --focal")),
    };
    let bundle = load_corpus_dir(&inputs.corpus)?;
    let vocab = Vocabulary::new(read_vocabulary(&inputs.vocab)?)?;
    let outlets = match &inputs.outlets {
        Some(p) => read_outlets(p)?,
        None => BTreeMap::new(),
    };
    let mut members: Vec<(Option<usize>, Vec<usize>, Vec<usize>)> = match &inputs.assignments {
        Some(dir) => {
            let (claims, papers) = load_assignments(dir, &bundle)?;
            cluster_members(&claims)
                .into_iter()
                .zip(cluster_members(&papers))
                .enumerate()
                .map(|(c, (ci, pi))| (Some(c), ci, pi))
                .collect()
        }
        None => vec![(
            None,
            (0..bundle.claims.len()).collect(),
            (0..bundle.papers.len()).collect(),
        )],
    };
    if let Some(c) = inputs.cluster {
        if inputs.assignments.is_none() {
            return Err(usage("--cluster needs --assignments"));
        }
        if c >= members.len() {
            return Err(usage(format!(
                "--cluster {c} but only {} clusters",
                members.len()
            )));
        }
        members = vec![members.swap_remove(c)];
    }
    let mut groups = Vec::with_capacity(members.len());
    for (cluster, ci, pi) in members {
        let claims: Vec<ClaimMeta> = ci.iter().map(|&i| bundle.claims[i].clone()).collect();
        let papers: Vec<PaperRecord> = pi.iter().map(|&j| bundle.papers[j].clone()).collect();
        let weights = claim_weights(&claims, &bundle.postings, &outlets, g.theta);
        let graph = build_graph(&claims, &vocab, topology.clone(), &weights)?;
        let ranked = rank(&graph)?;
        groups.push(Group {
            cluster,
            claims,
            papers,
            ranked,
        });
    }
    Ok(groups)
}

#[derive(Serialize)]
struct RankReport<'a> {
    cluster: Option<usize>,
    claims: usize,
    edges: &'a [RankedEdge],
}

fn group_label(c: Option<usize>) -> String {
    c.map_or_else(|| "corpus".to_string(), |c| format!("cluster {c}"))
}

fn rank_cmd(a: RankArgs, g: &Global) -> Result<()> {
    let groups = ranked_groups(&a.inputs, g)?;
    let mut text = String::new();
    for grp in &groups {
        let _ = writeln!(
            text,
            "{} ({} claims, {} edges)",
            group_label(grp.cluster),
            grp.claims.len(),
            grp.ranked.len()
        );
        for e in grp.ranked.iter().take(a.top) {
            let _ = writeln!(
                text,
                "  {:.6}\t{} -> {}\t{}\t{:.6}",
                e.score, e.source, e.target, e.claim_id, e.weight
            );
        }
    }
    print!("{text}");
    if let Some(path) = a.out {
        let report: Vec<RankReport<'_>> = groups
            .iter()
            .map(|grp| RankReport {
                cluster: grp.cluster,
                claims: grp.claims.len(),
                edges: &grp.ranked,
            })
            .collect();
        write_json(&path, &report)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ContextEntry {
    cluster: Option<usize>,
    rank: usize,
    score: f64,
    context: ContextBundle,
}

fn context(a: ContextArgs, g: &Global) -> Result<()> {
    if !(0.0..=1.0).contains(&a.threshold) {
        return Err(usage("--threshold must lie in [0, 1]"));
    }
    let groups = ranked_groups(&a.inputs, g)?;
    let db: Vec<VerifiedClaim> = match &a.verified {
        Some(p) => read_jsonl(p)?,
        None => Vec::new(),
    };
    let mut entries = Vec::new();
    for grp in &groups {
        let mut seen = Vec::new();
        for e in &grp.ranked {
            if seen.len() == a.top {
                break;
            }
            if seen.contains(&e.claim_id) {
                continue;
            }
            seen.push(e.claim_id.clone());
            let claim = grp
                .claims
                .iter()
                .find(|c| c.id == e.claim_id)
                .expect("ranked claims come from the group");
            let bundle = assemble_context(claim, &grp.claims, &grp.papers, &db, g.k, a.threshold)?;
            entries.push(ContextEntry {
                cluster: grp.cluster,
                rank: seen.len(),
                score: e.score,
                context: bundle,
            });
        }
    }
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    write_json(&a.out.join("context.json"), &entries)?;
    let mut text = String::new();
    for e in &entries {
        let _ = writeln!(
            text,
            "[{} #{}] centrality {:.6}",
            group_label(e.cluster),
            e.rank,
            e.score
        );
        text.push_str(&e.context.render());
        text.push('\n');
    }
    fs::write(a.out.join("context.txt"), &text)?;
    println!("{} contexts -> {}", entries.len(), a.out.display());
    Ok(())
}

fn synth(a: SynthArgs, g: &Global) -> Result<()> {
    let params = SynthParams {
        n_clusters: g.clusters,
        n_claims: a.claims,
        n_papers: a.papers,
        dim: a.dim,
        noise: a.noise,
        link_noise: a.link_noise,
        seed: g.seed,
    };
    let s = generate_synthetic(&params).map_err(|e| usage(e.to_string()))?;
    save_corpus(&s.bundle, &a.out)?;
    write_vocabulary(&a.out.join("vocab.tsv"), &s.vocabulary)?;
    write_outlets(&a.out.join("outlets.tsv"), &s.outlets)?;
    write_jsonl(&a.out.join("verified.jsonl"), &s.verified)?;
    let truth = a.out.join("truth");
    fs::create_dir_all(&truth)?;
    let claim_ids: Vec<&str> = s.bundle.claims.iter().map(|c| c.id.as_str()).collect();
    let paper_ids: Vec<&str> = s.bundle.papers.iter().map(|p| p.id.as_str()).collect();
    save_clusters(
        &truth.join(CLAIMS_CLUSTERS),
        &claim_ids,
        &ClusterMatrix::from_labels(&s.claim_labels, g.clusters)?,
    )?;
    save_clusters(
        &truth.join(PAPERS_CLUSTERS),
        &paper_ids,
        &ClusterMatrix::from_labels(&s.paper_labels, g.clusters)?,
    )?;
    let meta = RunSummary {
        model: "truth".into(),
        n_clusters: g.clusters,
        seed: g.seed,
        beta: g.beta,
        gamma: g.gamma,
        iterations: 0,
        converged: true,
        final_objective: None,
    };
    write_json(&truth.join(META), &meta)?;
    println!(
        "synthetic corpus: {} claims, {} papers, {} clusters -> {}",
        a.claims,
        a.papers,
        g.clusters,
        a.out.display()
    );
    Ok(())
}
