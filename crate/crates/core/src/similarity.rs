//! Vector and set similarities used by the extractors, metrics and linking.

use std::collections::BTreeSet;

use ndarray::ArrayView1;

/// Plain cosine similarity; `None` when either vector has zero norm.
pub fn cosine(u: ArrayView1<'_, f64>, v: ArrayView1<'_, f64>) -> Option<f64> {
    debug_assert_eq!(u.len(), v.len());
    let dot = u.dot(&v);
    let nu = u.dot(&u).sqrt();
    let nv = v.dot(&v).sqrt();
    if nu == 0.0 || nv == 0.0 {
        return None;
    }
    Some((dot / (nu * nv)).clamp(-1.0, 1.0))
}

/// Cosine similarity with negatives clamped to zero; zero-norm inputs score 0.
pub fn clamped_cosine(u: ArrayView1<'_, f64>, v: ArrayView1<'_, f64>) -> f64 {
    cosine(u, v).map_or(0.0, |c| c.max(0.0))
}

pub fn clamped_cosine_slices(u: &[f64], v: &[f64]) -> f64 {
    clamped_cosine(ArrayView1::from(u), ArrayView1::from(v))
}

/// Jaccard index of two sets; two empty sets score 0.
pub fn jaccard<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(b).count() as f64 / union as f64
}
