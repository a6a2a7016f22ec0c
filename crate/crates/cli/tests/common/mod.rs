//! Fixtures and a runner for the `sciclaim` binary.

#![allow(dead_code)]

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

pub fn sciclaim(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sciclaim"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn sciclaim")
}

/// Runs `args` and panics with stderr unless the exit code is 0.
pub fn sciclaim_ok(dir: &Path, args: &[&str]) -> Output {
    let out = sciclaim(dir, args);
    assert!(
        out.status.success(),
        "sciclaim {args:?} failed with {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

/// Sentences, lexicon and postings for `extract`.
pub fn write_extract_fixture(dir: &Path) {
    fs::create_dir_all(dir).unwrap();
    fs::write(dir.join("verbs.txt"), "suggest\nclaim\n# comment\n").unwrap();
    fs::write(dir.join("nouns.txt"), "study\nresearcher\n").unwrap();
    let sentences = [
        r#"{"id":"s1","text":"A study suggests coffee helps.","root_verb":"suggest","nsubj":"study","dobj":"coffee","embedding":[1.0,0.0]}"#,
        r#"{"id":"s2","text":"Cats eat fish.","root_verb":"eat","nsubj":"cat","dobj":"fish","embedding":[0.0,1.0]}"#,
        r#"{"id":"s3","text":"Smith claims tea cures colds.","root_verb":"claim","nsubj":"Smith","dobj":"tea","entities":[{"start":0,"end":5,"class":"Person"}],"embedding":[0.6,0.8]}"#,
    ];
    fs::write(dir.join("sentences.jsonl"), sentences.join("\n") + "\n").unwrap();
    let postings = [
        r#"{"id":"t1","embedding":[1.0,0.0],"reposts":9,"likes":0,"target_sentence_ids":["s1"]}"#,
        r#"{"id":"t2","embedding":[0.0,1.0],"reposts":1,"likes":0,"target_sentence_ids":["s1","s2"]}"#,
        r#"{"id":"t3","embedding":[0.6,0.8],"reposts":0,"likes":4,"target_sentence_ids":["s3"]}"#,
    ];
    fs::write(dir.join("postings.jsonl"), postings.join("\n") + "\n").unwrap();
}

/// Two claims of one article citing one paper, plus a vocabulary with
/// ibuprofen (condition) and covid-19 (disease).
pub fn write_ibuprofen_corpus(dir: &Path) {
    fs::create_dir_all(dir).unwrap();
    let claims = [
        r#"{"id":"c1","text":"Ibuprofen can worsen COVID-19 symptoms","article_id":"a1"}"#,
        r#"{"id":"c2","text":"WHO says fever is common in COVID-19","article_id":"a1","entities":[{"start":0,"end":3,"class":"Organization"}]}"#,
    ];
    fs::write(dir.join("claims.jsonl"), claims.join("\n") + "\n").unwrap();
    fs::write(dir.join("claims.csv"), "id,v0,v1\nc1,1.0,0.2\nc2,0.9,0.3\n").unwrap();
    fs::write(
        dir.join("papers.jsonl"),
        "{\"id\":\"p1\",\"title\":\"NSAIDs and respiratory infection\"}\n",
    )
    .unwrap();
    fs::write(dir.join("papers.csv"), "id,v0,v1\np1,1.0,0.1\n").unwrap();
    fs::write(
        dir.join("articles.jsonl"),
        "{\"id\":\"a1\",\"outlet\":\"daily\",\"paper_ids\":[\"p1\"]}\n",
    )
    .unwrap();
    fs::write(
        dir.join("vocab.tsv"),
        "ibuprofen\tcondition_symptom_medication_nutrient\nfever\tcondition_symptom_medication_nutrient\ncovid-19\tdisease_disorder\n",
    )
    .unwrap();
    fs::write(dir.join("outlets.tsv"), "daily\t0.8\n").unwrap();
}

/// Every file under `dir` with its contents, keyed by relative path.
pub fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().display().to_string();
                out.push((rel, fs::read(&path).unwrap()));
            }
        }
    }
    out.sort();
    out
}
