use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::seed;

/// `L` symmetric `K x K` block-probability matrices plus the sparsity scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectivityStack {
    matrices: Vec<DMatrix<f64>>,
    rho: f64,
}

impl ConnectivityStack {
    pub fn new(matrices: Vec<DMatrix<f64>>, rho: f64) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::InvalidConnectivity("no layers".into()));
        }
        if !(rho >= 0.0 && rho <= 1.0) {
            return Err(Error::InvalidConnectivity(format!("rho = {rho} outside [0, 1]")));
        }
        let k = matrices[0].nrows();
        if k == 0 {
            return Err(Error::InvalidConnectivity("K must be at least 1".into()));
        }
        for (l, b) in matrices.iter().enumerate() {
            if b.nrows() != k || b.ncols() != k {
                return Err(Error::InvalidConnectivity(format!(
                    "layer {l} is {}x{}, expected {k}x{k}",
                    b.nrows(),
                    b.ncols()
                )));
            }
            for r in 0..k {
                for c in 0..k {
                    let v = b[(r, c)];
                    if !(0.0..=1.0).contains(&v) {
                        return Err(Error::InvalidConnectivity(format!(
                            "layer {l} entry ({r}, {c}) = {v} outside [0, 1]"
                        )));
                    }
                    if v != b[(c, r)] {
                        return Err(Error::InvalidConnectivity(format!(
                            "layer {l} is not symmetric at ({r}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(Self { matrices, rho })
    }

    /// Same matrices, different sparsity.
    pub fn with_rho(self, rho: f64) -> Result<Self> {
        Self::new(self.matrices, rho)
    }

    pub fn k(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn layers(&self) -> usize {
        self.matrices.len()
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn matrices(&self) -> &[DMatrix<f64>] {
        &self.matrices
    }

    /// `|lambda_K(sum_l B_l)|`, the smallest eigenvalue magnitude of the
    /// summed block matrices.
    pub fn sum_min_abs_eigenvalue(&self) -> f64 {
        let k = self.k();
        let mut sum = DMatrix::zeros(k, k);
        for b in &self.matrices {
            sum += b;
        }
        sum.symmetric_eigenvalues()
            .iter()
            .map(|v| v.abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// True when `|lambda_K(sum_l B_l)| < 1e-8 * L`.
    pub fn is_nearly_rank_deficient(&self) -> bool {
        self.sum_min_abs_eigenvalue() < 1e-8 * self.layers() as f64
    }
}

/// `L` independent symmetric matrices with i.i.d. `Uniform[0, 1]` entries on
/// and above the diagonal. The returned stack has `rho = 1`.
pub fn generate_connectivity(k: usize, l: usize, seed: u64) -> Result<ConnectivityStack> {
    if k == 0 || l == 0 {
        return Err(Error::Config(format!("need K >= 1 and L >= 1, got K = {k}, L = {l}")));
    }
    let mut rng = seed::stream(seed, &[seed::TAG_CONNECTIVITY]);
    let matrices = (0..l)
        .map(|_| {
            let mut b = DMatrix::zeros(k, k);
            for r in 0..k {
                for c in r..k {
                    let v: f64 = rng.random();
                    b[(r, c)] = v;
                    b[(c, r)] = v;
                }
            }
            b
        })
        .collect();
    ConnectivityStack::new(matrices, 1.0)
}
