use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};
use crate::seed;

/// Row-sum tolerance for a valid membership matrix.
pub const ROW_SUM_TOL: f64 = 1e-12;

/// An `n x K` row-stochastic membership matrix.
///
/// Row `i` holds node `i`'s weights over the `K` communities. When the matrix
/// is ground truth produced by [`generate_membership`], `pure_hint` names one
/// pure node per community.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipMatrix {
    rows: DMatrix<f64>,
    pure_hint: Option<Vec<usize>>,
}

impl MembershipMatrix {
    /// Validates and wraps an `n x K` matrix.
    pub fn new(rows: DMatrix<f64>) -> Result<Self> {
        Self::validate(&rows, ROW_SUM_TOL)?;
        Ok(Self {
            rows,
            pure_hint: None,
        })
    }

    /// Builds from row vectors, checking rows within `tol` of summing to one and
    /// then renormalizing them exactly. Used when reading rounded values back
    /// from text.
    pub fn from_rows_lenient(rows: &[Vec<f64>], tol: f64) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMembership("no rows".into()));
        }
        let k = rows[0].len();
        let mut m = DMatrix::zeros(n, k);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidMembership(format!(
                    "row {i} has {} entries, expected {k}",
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                m[(i, c)] = v;
            }
        }
        Self::validate(&m, tol)?;
        for i in 0..n {
            let s: f64 = m.row(i).sum();
            for c in 0..k {
                m[(i, c)] /= s;
            }
        }
        Ok(Self {
            rows: m,
            pure_hint: None,
        })
    }

    /// Identity-like matrix: node `i` pure in community `labels[i]`.
    pub fn from_labels(labels: &[usize], k: usize) -> Result<Self> {
        let mut m = DMatrix::zeros(labels.len(), k);
        for (i, &c) in labels.iter().enumerate() {
            if c >= k {
                return Err(Error::InvalidMembership(format!(
                    "label {c} of node {i} out of range for K = {k}"
                )));
            }
            m[(i, c)] = 1.0;
        }
        Self::new(m)
    }

    /// Attaches one pure node per community. Row `hint[k]` must be `e_k`.
    pub fn with_pure_hint(mut self, hint: Vec<usize>) -> Result<Self> {
        if hint.len() != self.k() {
            return Err(Error::InvalidMembership(format!(
                "pure hint has {} entries, expected {}",
                hint.len(),
                self.k()
            )));
        }
        for (c, &i) in hint.iter().enumerate() {
            if i >= self.n() {
                return Err(Error::InvalidMembership(format!("pure hint {i} out of range")));
            }
            for cc in 0..self.k() {
                let want = if cc == c { 1.0 } else { 0.0 };
                if self.rows[(i, cc)] != want {
                    return Err(Error::InvalidMembership(format!(
                        "row {i} is not pure in community {c}"
                    )));
                }
            }
        }
        self.pure_hint = Some(hint);
        Ok(self)
    }

    fn validate(rows: &DMatrix<f64>, tol: f64) -> Result<()> {
        if rows.nrows() == 0 || rows.ncols() == 0 {
            return Err(Error::InvalidMembership("empty matrix".into()));
        }
        for i in 0..rows.nrows() {
            let mut s = 0.0;
            for c in 0..rows.ncols() {
                let v = rows[(i, c)];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidMembership(format!(
                        "entry ({i}, {c}) = {v} outside [0, 1]"
                    )));
                }
                s += v;
            }
            if (s - 1.0).abs() > tol {
                return Err(Error::InvalidMembership(format!("row {i} sums to {s}")));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.rows.nrows()
    }

    pub fn k(&self) -> usize {
        self.rows.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.rows
    }

    pub fn get(&self, i: usize, c: usize) -> f64 {
        self.rows[(i, c)]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.rows.row(i).iter().copied().collect()
    }

    pub fn pure_hint(&self) -> Option<&[usize]> {
        self.pure_hint.as_deref()
    }

    /// Indices of rows that are standard basis vectors.
    pub fn pure_nodes(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&i| self.rows.row(i).iter().any(|&v| v == 1.0))
            .collect()
    }

    /// Smallest singular value; ground truth needs it above `1e-10`.
    pub fn min_singular_value(&self) -> f64 {
        let sv = self.rows.clone().svd(false, false).singular_values;
        sv.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_full_rank(&self) -> bool {
        self.n() >= self.k() && self.min_singular_value() > 1e-10
    }

    /// Reorders nodes: row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        let rows = DMatrix::from_fn(self.n(), self.k(), |i, c| self.rows[(perm[i], c)]);
        Self {
            rows,
            pure_hint: None,
        }
    }

    /// Reorders communities: column `c` of the result is column `perm[c]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        let rows = DMatrix::from_fn(self.n(), self.k(), |i, c| self.rows[(i, perm[c])]);
        Self {
            rows,
            pure_hint: None,
        }
    }

    pub(crate) fn from_validated(rows: DMatrix<f64>) -> Self {
        debug_assert!(Self::validate(&rows, 1e-9).is_ok());
        Self {
            rows,
            pure_hint: None,
        }
    }
}

/// The mixed row built from two uniform draws for `K = 3`:
/// `(r1 / 2, r2 / 2, 1 - r1 / 2 - r2 / 2)`.
pub fn three_community_mixed_row(r1: f64, r2: f64) -> [f64; 3] {
    let a = r1 / 2.0;
    let b = r2 / 2.0;
    [a, b, 1.0 - a - b]
}

/// Simulation membership: the first `k * n0` nodes are pure in consecutive
/// blocks of `n0`, the rest mixed. For `k = 3` mixed rows follow
/// [`three_community_mixed_row`]; otherwise they are flat-Dirichlet draws.
pub fn generate_membership(n: usize, k: usize, n0: usize, seed: u64) -> Result<MembershipMatrix> {
    if k == 0 {
        return Err(Error::Config("K must be at least 1".into()));
    }
    if k * n0 > n {
        return Err(Error::Config(format!(
            "K * n0 = {} exceeds n = {n}",
            k * n0
        )));
    }
    let mut rng = seed::stream(seed, &[seed::TAG_MEMBERSHIP]);
    let mut m = DMatrix::zeros(n, k);
    for c in 0..k {
        for i in c * n0..(c + 1) * n0 {
            m[(i, c)] = 1.0;
        }
    }
    for i in k * n0..n {
        if k == 3 {
            let r1: f64 = rng.random();
            let r2: f64 = rng.random();
            let row = three_community_mixed_row(r1, r2);
            for c in 0..3 {
                m[(i, c)] = row[c];
            }
        } else {
            let draws: Vec<f64> = (0..k).map(|_| Exp1.sample(&mut rng)).collect();
            let total: f64 = draws.iter().sum();
            for c in 0..k {
                m[(i, c)] = draws[c] / total;
            }
        }
    }
    let pi = MembershipMatrix::new(m)?;
    if n0 > 0 {
        pi.with_pure_hint((0..k).map(|c| c * n0).collect())
    } else {
        Ok(pi)
    }
}
