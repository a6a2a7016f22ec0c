use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::contextualize::{TermClass, VocabularyTerm};
use crate::error::{Error, Result};

pub(crate) fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

pub(crate) fn parse_err(path: &Path, message: impl std::fmt::Display) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        message: message.to_string(),
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

/// One JSON value per non-blank line.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let text = read_text(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| parse_err(path, format!("line {}: {e}", i + 1)))
        })
        .collect()
}

pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    for item in items {
        let line = serde_json::to_string(item).map_err(|e| parse_err(path, e))?;
        writeln!(w, "{line}").map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Rows of an `id,<name>0,<name>1,…` CSV keyed by id, in file order.
pub fn read_id_matrix(path: &Path) -> Result<Vec<(String, Vec<f64>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| parse_err(path, e))?;
    let width = reader.headers().map_err(|e| parse_err(path, e))?.len();
    if width < 2 {
        return Err(parse_err(
            path,
            "expected an id column and at least one value column",
        ));
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(path, e))?;
        let id = record[0].to_string();
        let values = record
            .iter()
            .skip(1)
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| {
                        parse_err(path, format!("row {}: `{v}` is not a finite number", i + 1))
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push((id, values));
    }
    Ok(rows)
}

pub fn write_id_matrix<'a, I>(path: &Path, prefix: &str, width: usize, rows: I) -> Result<()>
where
    I: IntoIterator<Item = (&'a str, Vec<f64>)>,
{
    let mut w = csv::Writer::from_path(path).map_err(|e| parse_err(path, e))?;
    let mut header = vec!["id".to_string()];
    header.extend((0..width).map(|j| format!("{prefix}{j}")));
    w.write_record(&header).map_err(|e| parse_err(path, e))?;
    for (id, values) in rows {
        let mut record = Vec::with_capacity(width + 1);
        record.push(id.to_string());
        record.extend(values.iter().map(|v| v.to_string()));
        w.write_record(&record).map_err(|e| parse_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Tab-separated pairs, skipping blank and `#` lines.
fn read_tsv_pairs(path: &Path) -> Result<Vec<(String, String)>> {
    let text = read_text(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (a, b) = line.split_once('\t').ok_or_else(|| {
            parse_err(
                path,
                format!("line {}: expected two tab-separated fields", i + 1),
            )
        })?;
        out.push((a.trim().to_string(), b.trim().to_string()));
    }
    Ok(out)
}

pub fn read_vocabulary(path: &Path) -> Result<Vec<VocabularyTerm>> {
    read_tsv_pairs(path)?
        .into_iter()
        .map(|(term, class)| {
            let class: TermClass = class.parse().map_err(|e| parse_err(path, e))?;
            Ok(VocabularyTerm { term, class })
        })
        .collect()
}

pub fn write_vocabulary(path: &Path, terms: &[VocabularyTerm]) -> Result<()> {
    let body: String = terms
        .iter()
        .map(|t| format!("{}\t{}\n", t.term, t.class))
        .collect();
    fs::write(path, body).map_err(|e| io_err(path, e))
}

pub fn read_outlets(path: &Path) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for (outlet, score) in read_tsv_pairs(path)? {
        let s: f64 = score
            .parse()
            .ok()
            .filter(|s| (0.0..=1.0).contains(s))
            .ok_or_else(|| {
                parse_err(
                    path,
                    format!("score `{score}` of `{outlet}` is not in [0, 1]"),
                )
            })?;
        out.insert(outlet, s);
    }
    Ok(out)
}

pub fn write_outlets(path: &Path, outlets: &BTreeMap<String, f64>) -> Result<()> {
    let body: String = outlets.iter().map(|(o, s)| format!("{o}\t{s}\n")).collect();
    fs::write(path, body).map_err(|e| io_err(path, e))
}
