use std::cmp::Ordering;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

use crate::error::{Error, Result};
use crate::seed;

use super::AggregateMatrix;

/// Matrices up to this order are decomposed with the dense solver.
pub const DENSE_EIGEN_LIMIT: usize = 2000;

/// Relative residual target for iterative eigenpairs.
const LANCZOS_TOL: f64 = 1e-10;

/// Relative gap below which the `K`-th and `(K+1)`-th eigenvalue magnitudes
/// count as tied.
const DEGENERACY_TOL: f64 = 1e-10;

/// Tie in eigenvalue magnitude across the `K / K+1` boundary: the leading
/// subspace is not uniquely defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegeneracyWarning {
    pub kth: f64,
    pub next: f64,
}

/// The `K` leading (by magnitude) eigenpairs of a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    vectors: DMatrix<f64>,
    eigenvalues: Vec<f64>,
    degeneracy: Option<DegeneracyWarning>,
}

impl Embedding {
    /// Wraps precomputed eigenvectors (columns) and eigenvalues.
    pub fn new(vectors: DMatrix<f64>, eigenvalues: Vec<f64>) -> Result<Self> {
        if vectors.ncols() != eigenvalues.len() {
            return Err(Error::Dimension(format!(
                "{} eigenvector columns but {} eigenvalues",
                vectors.ncols(),
                eigenvalues.len()
            )));
        }
        Ok(Self {
            vectors,
            eigenvalues,
            degeneracy: None,
        })
    }

    pub fn n(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn k(&self) -> usize {
        self.vectors.ncols()
    }

    /// `n x K`, orthonormal columns.
    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    /// Signed eigenvalues, non-increasing in magnitude.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn degeneracy(&self) -> Option<DegeneracyWarning> {
        self.degeneracy
    }

    /// Replaces the vectors by `vectors * q`, keeping the eigenvalues.
    pub fn rotated(&self, q: &DMatrix<f64>) -> Self {
        Self {
            vectors: &self.vectors * q,
            eigenvalues: self.eigenvalues.clone(),
            degeneracy: self.degeneracy,
        }
    }
}

fn magnitude_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| {
        values[b]
            .abs()
            .partial_cmp(&values[a].abs())
            .unwrap_or(Ordering::Equal)
            .then(values[b].partial_cmp(&values[a]).unwrap_or(Ordering::Equal))
            .then(a.cmp(&b))
    });
    idx
}

/// Flips each column so its largest-magnitude entry (first one on ties) is
/// positive.
fn normalize_signs(v: &mut DMatrix<f64>) {
    for c in 0..v.ncols() {
        let mut best = 0;
        for i in 1..v.nrows() {
            if v[(i, c)].abs() > v[(best, c)].abs() {
                best = i;
            }
        }
        if v[(best, c)] < 0.0 {
            v.column_mut(c).neg_mut();
        }
    }
}

fn degeneracy(kth: f64, next: Option<f64>, scale: f64) -> Option<DegeneracyWarning> {
    let next = next?;
    let gap = (kth.abs() - next.abs()).abs();
    (gap <= DEGENERACY_TOL * scale.max(1.0)).then_some(DegeneracyWarning { kth, next })
}

/// Top-`k` eigenpairs of `agg` ordered by decreasing `|lambda|`; magnitude
/// ties go to the larger signed value. Each eigenvector is sign-normalized.
pub fn top_k_eigen(agg: &AggregateMatrix, k: usize) -> Result<Embedding> {
    let n = agg.n();
    if k == 0 || k > n {
        return Err(Error::Dimension(format!("requested K = {k} eigenpairs of an {n}x{n} matrix")));
    }
    let mut emb = match agg.dense() {
        Some(m) if n <= DENSE_EIGEN_LIMIT => dense_top_k(m, k),
        _ => lanczos_top_k(n, k, |x, y| agg.matvec(x, y))?,
    };
    normalize_signs(&mut emb.vectors);
    if let Some(w) = emb.degeneracy {
        log::warn!(
            "eigenvalue magnitudes tie across the K = {k} boundary ({:.6e} vs {:.6e})",
            w.kth,
            w.next
        );
    }
    Ok(emb)
}

fn dense_top_k(m: &DMatrix<f64>, k: usize) -> Embedding {
    let eig = SymmetricEigen::new(m.clone());
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let order = magnitude_order(&values);
    let vectors = DMatrix::from_fn(m.nrows(), k, |i, c| eig.eigenvectors[(i, order[c])]);
    let eigenvalues: Vec<f64> = order[..k].iter().map(|&j| values[j]).collect();
    let next = order.get(k).map(|&j| values[j]);
    let scale = eigenvalues[0].abs();
    Embedding {
        vectors,
        degeneracy: degeneracy(eigenvalues[k - 1], next, scale),
        eigenvalues,
    }
}

/// Lanczos with full reorthogonalization. Ritz pairs at both ends of the
/// spectrum converge, so the largest magnitudes are read off directly.
pub(crate) fn lanczos_top_k(
    n: usize,
    k: usize,
    matvec: impl Fn(&[f64], &mut [f64]),
) -> Result<Embedding> {
    let mut rng = seed::stream(0x4c_414e_435a, &[n as u64, k as u64]);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    // beta[j] couples basis[j] and basis[j + 1].
    let mut beta: Vec<f64> = Vec::new();

    let mut q = random_unit_orthogonal(&mut rng, n, &basis).expect("empty basis");
    let mut w = vec![0.0; n];
    let min_steps = (2 * k + 10).min(n);

    loop {
        matvec(&q, &mut w);
        let a = dot(&w, &q);
        axpy(-a, &q, &mut w);
        if let (Some(prev), Some(&b)) = (basis.last(), beta.last()) {
            axpy(-b, prev, &mut w);
        }
        basis.push(q);
        alpha.push(a);
        for _ in 0..2 {
            for v in &basis {
                let c = dot(&w, v);
                axpy(-c, v, &mut w);
            }
        }
        let b = norm(&w);
        let m = basis.len();

        let scale_guess = alpha.iter().chain(&beta).fold(0.0_f64, |s, v| s.max(v.abs()));
        let breakdown = b <= 1e-13 * scale_guess.max(1.0);
        let check = m >= min_steps && (m % 5 == 0 || breakdown || m == n);
        if check || m == n {
            let (ritz, s) = tridiagonal_eigen(&alpha, &beta);
            let order = magnitude_order(&ritz);
            let top = &order[..k.min(m)];
            let scale = ritz[order[0]].abs().max(1.0);
            let resid_b = if breakdown { 0.0 } else { b };
            let converged = m >= k
                && top
                    .iter()
                    .all(|&j| (resid_b * s[(m - 1, j)]).abs() <= LANCZOS_TOL * scale);
            if converged || m == n {
                if m < k {
                    return Err(Error::NoConvergence(format!(
                        "Krylov space exhausted at dimension {m} < K = {k}"
                    )));
                }
                let mut vectors = DMatrix::zeros(n, k);
                for (c, &j) in top.iter().enumerate() {
                    for (r, v) in basis.iter().enumerate() {
                        let coef = s[(r, j)];
                        for i in 0..n {
                            vectors[(i, c)] += coef * v[i];
                        }
                    }
                }
                let eigenvalues: Vec<f64> = top.iter().map(|&j| ritz[j]).collect();
                let next = order.get(k).map(|&j| ritz[j]);
                return Ok(Embedding {
                    degeneracy: degeneracy(eigenvalues[k - 1], next, scale),
                    vectors,
                    eigenvalues,
                });
            }
        }

        if breakdown {
            // Invariant subspace found; continue in its complement.
            match random_unit_orthogonal(&mut rng, n, &basis) {
                Some(fresh) => {
                    beta.push(0.0);
                    q = fresh;
                }
                None => {
                    return Err(Error::NoConvergence(
                        "could not extend Krylov basis after breakdown".into(),
                    ))
                }
            }
        } else {
            beta.push(b);
            q = w.iter().map(|v| v / b).collect();
        }
    }
}

fn tridiagonal_eigen(alpha: &[f64], beta: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let m = alpha.len();
    let mut t = DMatrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

fn random_unit_orthogonal(rng: &mut impl Rng, n: usize, basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    for _ in 0..8 {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        for _ in 0..2 {
            for b in basis {
                let c = dot(&v, b);
                axpy(-c, b, &mut v);
            }
        }
        let nv = norm(&v);
        if nv > 1e-8 {
            v.iter_mut().for_each(|x| *x /= nv);
            return Some(v);
        }
    }
    None
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}
