use std::collections::BTreeMap;

use crate::extract::PostingRecord;
use crate::records::ClaimMeta;

/// Reputation assigned to outlets missing from the table.
pub const NEUTRAL_REPUTATION: f64 = 0.5;

/// Default mix between popularity and unreliability.
pub const DEFAULT_THETA: f64 = 0.4;

/// Summed reposts and likes of the postings attached to the claim, either
/// through its `posting_ids` or through the postings' own targets.
pub fn raw_popularity(claim: &ClaimMeta, postings: &[PostingRecord]) -> u64 {
    postings
        .iter()
        .filter(|p| claim.posting_ids.contains(&p.id) || p.references(&claim.id))
        .map(PostingRecord::raw_popularity)
        .sum()
}

/// `ln(1 + raw)` min-max scaled to `[0, 1]` over the claims given.
pub fn popularity_score(claims: &[ClaimMeta], postings: &[PostingRecord]) -> BTreeMap<String, f64> {
    let raws: Vec<(String, f64)> = claims
        .iter()
        .map(|c| (c.id.clone(), raw_popularity(c, postings) as f64))
        .collect();
    scale_popularity(&raws)
}

/// Log-then-min-max scaling of raw popularity counts.
///
/// A lone claim scores 1 if it has any popularity and 0 otherwise; several
/// claims with identical popularity all score 0.5.
pub fn scale_popularity(raws: &[(String, f64)]) -> BTreeMap<String, f64> {
    if let [(id, raw)] = raws {
        return BTreeMap::from([(id.clone(), if *raw > 0.0 { 1.0 } else { 0.0 })]);
    }
    let logs: Vec<f64> = raws.iter().map(|(_, r)| r.ln_1p()).collect();
    let lo = logs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = hi - lo;
    raws.iter()
        .zip(logs)
        .map(|((id, _), v)| {
            let s = if spread > 0.0 { (v - lo) / spread } else { 0.5 };
            (id.clone(), s)
        })
        .collect()
}

pub fn reputation_score(claim: &ClaimMeta, outlets: &BTreeMap<String, f64>) -> f64 {
    outlets
        .get(&claim.outlet)
        .copied()
        .unwrap_or(NEUTRAL_REPUTATION)
}

/// `θ·pop + (1 − θ)·(1 − rep)` for `pop`, `rep`, `θ` in `[0, 1]`.
pub fn edge_weight(pop: f64, rep: f64, theta: f64) -> f64 {
    theta * pop + (1.0 - theta) * (1.0 - rep)
}

/// Edge weight of every claim from its popularity and outlet reputation.
pub fn claim_weights(
    claims: &[ClaimMeta],
    postings: &[PostingRecord],
    outlets: &BTreeMap<String, f64>,
    theta: f64,
) -> BTreeMap<String, f64> {
    let pop = popularity_score(claims, postings);
    claims
        .iter()
        .map(|c| {
            (
                c.id.clone(),
                edge_weight(pop[&c.id], reputation_score(c, outlets), theta),
            )
        })
        .collect()
}
