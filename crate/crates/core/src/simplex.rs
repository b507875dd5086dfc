//! Vertex hunting by successive projection and membership reconstruction.

use nalgebra::DMatrix;

use crate::aggregate::Embedding;
use crate::error::{Error, Result};
use crate::model::MembershipMatrix;

/// Residual row norm below which successive projection gives up.
pub const RESIDUAL_FLOOR: f64 = 1e-12;

/// Corner matrices with a larger 2-norm condition number are rejected.
pub const MAX_CORNER_CONDITION: f64 = 1e12;

/// Estimated pure nodes, one per community, in selection order.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexSet {
    pub indices: Vec<usize>,
    /// Residual norm of each pick at the time it was selected.
    pub selection_norms: Vec<f64>,
}

/// Successive projection on the rows of `rows` (`n x d`).
///
/// Repeats `k` times: take the row with the largest residual norm (first index
/// on ties) and project every residual row onto the orthogonal complement of
/// it.
pub fn successive_projection(rows: &DMatrix<f64>, k: usize) -> Result<VertexSet> {
    let n = rows.nrows();
    if k > n {
        return Err(Error::Dimension(format!("K = {k} exceeds the {n} rows")));
    }
    if rows.iter().any(|v| !v.is_finite()) {
        return Err(Error::UnsupportedInput("non-finite entries in SP input".into()));
    }
    let mut residual = rows.clone();
    let mut indices = Vec::with_capacity(k);
    let mut selection_norms = Vec::with_capacity(k);
    for picked in 0..k {
        let mut best = 0;
        let mut best_norm = -1.0;
        for i in 0..n {
            let norm = residual.row(i).norm_squared();
            if norm > best_norm {
                best = i;
                best_norm = norm;
            }
        }
        let best_norm = best_norm.max(0.0).sqrt();
        if best_norm < RESIDUAL_FLOOR {
            return Err(Error::RankDeficiency {
                picked,
                k,
                residual: best_norm,
            });
        }
        indices.push(best);
        selection_norms.push(best_norm);
        let u = residual.row(best).transpose() / best_norm;
        let coeffs = &residual * &u;
        residual -= coeffs * u.transpose();
    }
    Ok(VertexSet {
        indices,
        selection_norms,
    })
}

/// Reconstructed memberships and bookkeeping from the clamp step.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub memberships: MembershipMatrix,
    /// Rows with no positive coefficient, replaced by the uniform row.
    pub zero_rows: Vec<usize>,
}

/// `Z = X * X[I, :]^{-1}`, negatives clamped to zero, rows scaled to unit
/// `l1` norm. Rows left all-zero by the clamp become uniform.
pub fn estimate_memberships(emb: &Embedding, vertices: &VertexSet) -> Result<Reconstruction> {
    reconstruct(emb.vectors(), &vertices.indices)
}

pub(crate) fn reconstruct(x: &DMatrix<f64>, corner_rows: &[usize]) -> Result<Reconstruction> {
    let (n, k) = x.shape();
    if corner_rows.len() != k {
        return Err(Error::Dimension(format!(
            "{} vertices for a {k}-column embedding",
            corner_rows.len()
        )));
    }
    if let Some(&bad) = corner_rows.iter().find(|&&i| i >= n) {
        return Err(Error::Dimension(format!("vertex {bad} out of range for n = {n}")));
    }
    let corner = DMatrix::from_fn(k, k, |r, c| x[(corner_rows[r], c)]);
    let sv = corner.clone().svd(false, false).singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(cond <= MAX_CORNER_CONDITION) {
        return Err(Error::IllConditionedCorner(cond));
    }
    // Z C = X  <=>  C^T Z^T = X^T
    let lu = corner.transpose().lu();
    let zt = lu
        .solve(&x.transpose())
        .ok_or(Error::IllConditionedCorner(f64::INFINITY))?;
    let mut z = zt.transpose();
    let mut zero_rows = Vec::new();
    for i in 0..n {
        let mut total = 0.0;
        for c in 0..k {
            let v = z[(i, c)].max(0.0);
            z[(i, c)] = v;
            total += v;
        }
        if total > 0.0 {
            for c in 0..k {
                z[(i, c)] /= total;
            }
        } else {
            zero_rows.push(i);
            for c in 0..k {
                z[(i, c)] = 1.0 / k as f64;
            }
        }
    }
    if !zero_rows.is_empty() {
        log::warn!(
            "{} rows had no positive coefficient and were set uniform",
            zero_rows.len()
        );
    }
    Ok(Reconstruction {
        memberships: MembershipMatrix::from_validated(z),
        zero_rows,
    })
}
