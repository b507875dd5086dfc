//! Aggregate matrices built from all layers, and their leading eigenpairs.
//!
//! Three aggregates are supported:
//!
//! - the sum `A_sum = sum_l A_l`,
//! - the debiased sum of squares `S_sum = sum_l (A_l^2 - D_l)`, where `D_l` is
//!   the degree matrix of layer `l`,
//! - the plain sum of squares `sum_l A_l^2`.
//!
//! Up to [`DENSE_STORAGE_LIMIT`] nodes the aggregate is materialized. Larger
//! networks keep the layers and apply the aggregate as an operator.

mod eigen;

use nalgebra::DMatrix;
use rayon::prelude::*;

pub use eigen::{top_k_eigen, DegeneracyWarning, Embedding, DENSE_EIGEN_LIMIT};

use crate::error::{Error, Result};
use crate::model::{Layer, MultiLayerNetwork};

pub const DENSE_STORAGE_LIMIT: usize = 2048;

const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AggregateKind {
    Sum,
    DebiasedSos,
    Sos,
}

/// How an aggregate is held in memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Representation {
    /// Dense up to [`DENSE_STORAGE_LIMIT`] nodes, operator form above.
    #[default]
    Auto,
    Dense,
    Operator,
}

#[derive(Debug, Clone)]
enum Storage {
    Dense(DMatrix<f64>),
    Operator(Vec<Layer>),
}

/// A symmetric `n x n` aggregate matrix.
#[derive(Debug, Clone)]
pub struct AggregateMatrix {
    n: usize,
    kind: AggregateKind,
    storage: Storage,
}

impl AggregateMatrix {
    /// Wraps an explicit symmetric matrix, e.g. a population aggregate.
    pub fn from_dense(kind: AggregateKind, matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n || n == 0 {
            return Err(Error::Dimension(format!(
                "aggregate must be square and nonempty, got {}x{}",
                n,
                matrix.ncols()
            )));
        }
        let scale = matrix.amax().max(1.0);
        for i in 0..n {
            for j in i + 1..n {
                if (matrix[(i, j)] - matrix[(j, i)]).abs() > SYMMETRY_TOL * scale {
                    return Err(Error::InvalidNetwork(format!(
                        "aggregate not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self {
            n,
            kind,
            storage: Storage::Dense(matrix),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> AggregateKind {
        self.kind
    }

    /// The materialized matrix, if stored densely.
    pub fn dense(&self) -> Option<&DMatrix<f64>> {
        match &self.storage {
            Storage::Dense(m) => Some(m),
            Storage::Operator(_) => None,
        }
    }

    pub fn is_operator(&self) -> bool {
        matches!(self.storage, Storage::Operator(_))
    }

    /// Materializes the matrix regardless of storage.
    pub fn to_dense(&self) -> DMatrix<f64> {
        match &self.storage {
            Storage::Dense(m) => m.clone(),
            Storage::Operator(layers) => dense_aggregate(self.n, layers, self.kind),
        }
    }

    /// `y = M x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        match &self.storage {
            Storage::Dense(m) => {
                for (i, yi) in y.iter_mut().enumerate() {
                    *yi = m.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
                }
            }
            Storage::Operator(layers) => {
                y.iter_mut().for_each(|v| *v = 0.0);
                let mut t = vec![0.0; self.n];
                let mut u = vec![0.0; self.n];
                for layer in layers {
                    match self.kind {
                        AggregateKind::Sum => {
                            layer.matvec(x, &mut t);
                            y.iter_mut().zip(&t).for_each(|(a, b)| *a += b);
                        }
                        AggregateKind::Sos | AggregateKind::DebiasedSos => {
                            layer.matvec(x, &mut t);
                            layer.matvec(&t, &mut u);
                            y.iter_mut().zip(&u).for_each(|(a, b)| *a += b);
                            if self.kind == AggregateKind::DebiasedSos {
                                for (i, yi) in y.iter_mut().enumerate() {
                                    *yi -= layer.degree(i) * x[i];
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Builds the aggregate of `kind` with automatic storage.
pub fn build(net: &MultiLayerNetwork, kind: AggregateKind) -> Result<AggregateMatrix> {
    build_with(net, kind, Representation::Auto)
}

pub fn build_with(
    net: &MultiLayerNetwork,
    kind: AggregateKind,
    repr: Representation,
) -> Result<AggregateMatrix> {
    if kind == AggregateKind::DebiasedSos && !net.is_binary() {
        return Err(Error::UnsupportedInput(
            "the debiased sum of squares requires binary layers".into(),
        ));
    }
    let n = net.n();
    let operator = match repr {
        Representation::Auto => n > DENSE_STORAGE_LIMIT,
        Representation::Dense => false,
        Representation::Operator => true,
    };
    let storage = if operator {
        Storage::Operator(net.layers().to_vec())
    } else {
        Storage::Dense(dense_aggregate(n, net.layers(), kind))
    };
    Ok(AggregateMatrix { n, kind, storage })
}

/// `A_sum = sum_l A_l`.
pub fn build_asum(net: &MultiLayerNetwork) -> AggregateMatrix {
    build(net, AggregateKind::Sum).expect("sum aggregate accepts any network")
}

/// `S_sum = sum_l (A_l^2 - D_l)`. Binary layers only.
pub fn build_ssum_debiased(net: &MultiLayerNetwork) -> Result<AggregateMatrix> {
    build(net, AggregateKind::DebiasedSos)
}

/// `sum_l A_l^2`.
pub fn build_sos(net: &MultiLayerNetwork) -> AggregateMatrix {
    build(net, AggregateKind::Sos).expect("sum of squares accepts any network")
}

/// Rows are filled in parallel; each row sums the layers in order, so the
/// result does not depend on the thread count.
fn dense_aggregate(n: usize, layers: &[Layer], kind: AggregateKind) -> DMatrix<f64> {
    let mut buf = vec![0.0; n * n];
    buf.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for layer in layers {
            let (cols, vals) = layer.neighbors(i);
            match kind {
                AggregateKind::Sum => {
                    for (&j, &w) in cols.iter().zip(vals) {
                        row[j] += w;
                    }
                }
                AggregateKind::Sos | AggregateKind::DebiasedSos => {
                    // (A^2)(i, :) = sum_p A(i, p) A(p, :)
                    for (&p, &wp) in cols.iter().zip(vals) {
                        let (pcols, pvals) = layer.neighbors(p);
                        for (&j, &w) in pcols.iter().zip(pvals) {
                            row[j] += wp * w;
                        }
                    }
                    if kind == AggregateKind::DebiasedSos {
                        row[i] -= layer.degree(i);
                    }
                }
            }
        }
    });
    // Symmetric, so row-major and column-major layouts coincide.
    DMatrix::from_vec(n, n, buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path() -> DMatrix<f64> {
        DMatrix::from_row_slice(3, 3, &[0., 1., 0., 1., 0., 1., 0., 1., 0.])
    }

    fn net(layers: &[DMatrix<f64>]) -> MultiLayerNetwork {
        MultiLayerNetwork::from_dense(layers).unwrap()
    }

    #[test]
    fn asum_hand_example() {
        let edge13 = DMatrix::from_row_slice(3, 3, &[0., 0., 1., 0., 0., 0., 1., 0., 0.]);
        let a = build_asum(&net(&[path(), edge13]));
        let want = DMatrix::from_row_slice(3, 3, &[0., 1., 1., 1., 0., 1., 1., 1., 0.]);
        assert_eq!(a.dense().unwrap(), &want);
    }

    #[test]
    fn asum_linearity() {
        let a = build_asum(&net(&[path(), path()]));
        assert_eq!(a.dense().unwrap(), &(path() * 2.0));
        let single = build_asum(&net(&[path()]));
        assert_eq!(single.dense().unwrap(), &path());
    }

    #[test]
    fn debiased_path_example() {
        let s = build_ssum_debiased(&net(&[path()])).unwrap();
        let want = DMatrix::from_row_slice(3, 3, &[0., 0., 1., 0., 0., 0., 1., 0., 0.]);
        assert_eq!(s.dense().unwrap(), &want);
        let sos = build_sos(&net(&[path()]));
        let want = DMatrix::from_row_slice(3, 3, &[1., 0., 1., 0., 2., 0., 1., 0., 1.]);
        assert_eq!(sos.dense().unwrap(), &want);
    }

    #[test]
    fn zero_layers_give_zero() {
        let z = DMatrix::zeros(4, 4);
        let n = net(&[z.clone(), z.clone()]);
        for kind in [AggregateKind::Sum, AggregateKind::DebiasedSos, AggregateKind::Sos] {
            assert_eq!(build(&n, kind).unwrap().dense().unwrap(), &z);
        }
    }

    #[test]
    fn weighted_input_rejected_for_debiasing() {
        let w = DMatrix::from_row_slice(2, 2, &[0., 2., 2., 0.]);
        assert!(matches!(
            build_ssum_debiased(&net(&[w])),
            Err(Error::UnsupportedInput(_))
        ));
    }

    #[test]
    fn operator_matches_dense() {
        let loops = DMatrix::from_row_slice(3, 3, &[1., 1., 0., 1., 0., 1., 0., 1., 1.]);
        let n = net(&[path(), loops]);
        let x = [0.3, -1.0, 2.0];
        for kind in [AggregateKind::Sum, AggregateKind::DebiasedSos, AggregateKind::Sos] {
            let d = build_with(&n, kind, Representation::Dense).unwrap();
            let o = build_with(&n, kind, Representation::Operator).unwrap();
            assert!(o.is_operator());
            assert_eq!(o.to_dense(), d.dense().unwrap().clone());
            let (mut yd, mut yo) = ([0.0; 3], [0.0; 3]);
            d.matvec(&x, &mut yd);
            o.matvec(&x, &mut yo);
            for i in 0..3 {
                assert!((yd[i] - yo[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn from_dense_rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[0., 1., 0., 0.]);
        assert!(AggregateMatrix::from_dense(AggregateKind::Sum, m).is_err());
    }
}
