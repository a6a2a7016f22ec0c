use std::path::Path;

use ndarray::Array2;

use super::files::{parse_err, read_id_matrix, write_id_matrix};
use crate::error::{shape, Result};
use crate::model::ClusterMatrix;

/// Memberships as `id,c0,c1,…` CSV; values round-trip bit-exactly.
pub fn save_clusters<S: AsRef<str>>(path: &Path, ids: &[S], m: &ClusterMatrix) -> Result<()> {
    if ids.len() != m.rows() {
        return Err(shape(format!(
            "{} ids for {} membership rows",
            ids.len(),
            m.rows()
        )));
    }
    write_id_matrix(
        path,
        "c",
        m.n_clusters(),
        ids.iter()
            .zip(m.view().outer_iter())
            .map(|(id, row)| (id.as_ref(), row.to_vec())),
    )
}

/// Reads memberships written by `save_clusters`; hard if every row is one-hot.
pub fn load_clusters(path: &Path) -> Result<(Vec<String>, ClusterMatrix)> {
    let rows = read_id_matrix(path)?;
    let k = rows.first().map_or(0, |r| r.1.len());
    let mut data = Array2::zeros((rows.len(), k));
    let mut ids = Vec::with_capacity(rows.len());
    for (i, (id, values)) in rows.into_iter().enumerate() {
        data.row_mut(i).assign(&ndarray::Array1::from(values));
        ids.push(id);
    }
    let m = ClusterMatrix::infer(data).map_err(|e| parse_err(path, e))?;
    Ok((ids, m))
}
