use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// One symmetric layer in compressed-row form.
///
/// Both `(i, j)` and `(j, i)` are stored; a self-loop is stored once.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl Layer {
    pub fn empty(n: usize) -> Self {
        Self {
            offsets: vec![0; n + 1],
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    /// Builds a symmetric layer from undirected edges. Each `(u, v, w)` sets
    /// both `(u, v)` and `(v, u)`; repeated pairs keep the largest weight.
    /// Zero weights are dropped.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut triples = Vec::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidNetwork(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidNetwork(format!(
                    "edge ({u}, {v}) has weight {w}"
                )));
            }
            if w == 0.0 {
                continue;
            }
            triples.push((u, v, w));
            if u != v {
                triples.push((v, u, w));
            }
        }
        triples.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)).then(b.2.total_cmp(&a.2)));
        triples.dedup_by(|next, kept| next.0 == kept.0 && next.1 == kept.1);
        Ok(Self::from_sorted(n, triples))
    }

    fn from_sorted(n: usize, triples: Vec<(usize, usize, f64)>) -> Self {
        let mut offsets = vec![0; n + 1];
        for &(u, _, _) in &triples {
            offsets[u + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let cols = triples.iter().map(|t| t.1).collect();
        let vals = triples.iter().map(|t| t.2).collect();
        Self { offsets, cols, vals }
    }

    /// Builds from a dense symmetric matrix.
    pub fn from_dense(m: &DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::Dimension(format!("layer is {}x{}", n, m.ncols())));
        }
        let mut triples = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let w = m[(i, j)];
                if w != m[(j, i)] {
                    return Err(Error::InvalidNetwork(format!(
                        "layer not symmetric at ({i}, {j})"
                    )));
                }
                if !(w.is_finite() && w >= 0.0) {
                    return Err(Error::InvalidNetwork(format!("entry ({i}, {j}) = {w}")));
                }
                if w != 0.0 {
                    triples.push((i, j, w));
                }
            }
        }
        Ok(Self::from_sorted(n, triples))
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Stored entries, counting `(i, j)` and `(j, i)` separately.
    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn neighbors(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.offsets[i]..self.offsets[i + 1];
        (&self.cols[r.clone()], &self.vals[r])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.neighbors(i);
        match cols.binary_search(&j) {
            Ok(p) => vals[p],
            Err(_) => 0.0,
        }
    }

    /// Weighted degree `sum_j A(i, j)`, counting a self-loop once.
    pub fn degree(&self, i: usize) -> f64 {
        self.neighbors(i).1.iter().sum()
    }

    pub fn degrees(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.degree(i)).collect()
    }

    /// `sum_i degree(i)`.
    pub fn total_degree(&self) -> f64 {
        self.vals.iter().sum()
    }

    pub fn is_binary(&self) -> bool {
        self.vals.iter().all(|&v| v == 1.0)
    }

    pub fn has_self_loops(&self) -> bool {
        (0..self.n()).any(|i| self.get(i, i) != 0.0)
    }

    /// Entries with `i <= j`.
    pub fn upper_edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n()).flat_map(move |i| {
            let (cols, vals) = self.neighbors(i);
            cols.iter()
                .zip(vals)
                .filter(move |(&j, _)| j >= i)
                .map(move |(&j, &w)| (i, j, w))
        })
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.neighbors(i);
            *yi = cols.iter().zip(vals).map(|(&j, &w)| w * x[j]).sum();
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            let (cols, vals) = self.neighbors(i);
            for (&j, &w) in cols.iter().zip(vals) {
                m[(i, j)] = w;
            }
        }
        m
    }

    /// Same layer with the diagonal cleared.
    pub fn without_self_loops(&self) -> Self {
        let n = self.n();
        let mut triples = Vec::with_capacity(self.nnz());
        for i in 0..n {
            let (cols, vals) = self.neighbors(i);
            for (&j, &w) in cols.iter().zip(vals) {
                if i != j {
                    triples.push((i, j, w));
                }
            }
        }
        Self::from_sorted(n, triples)
    }

    /// Same layer with every stored weight set to one.
    pub fn binarized(&self) -> Self {
        let mut out = self.clone();
        out.vals.iter_mut().for_each(|v| *v = 1.0);
        out
    }

    /// Relabels nodes: node `perm[i]` of `self` becomes node `i`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n();
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut triples = Vec::with_capacity(self.nnz());
        for i in 0..n {
            let (cols, vals) = self.neighbors(i);
            for (&j, &w) in cols.iter().zip(vals) {
                triples.push((inv[i], inv[j], w));
            }
        }
        triples.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        Self::from_sorted(n, triples)
    }
}

/// `L` symmetric layers over a shared node set.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiLayerNetwork {
    n: usize,
    layers: Vec<Layer>,
    binary: bool,
    allow_self_loops: bool,
}

impl MultiLayerNetwork {
    /// Wraps layers; `binary` is inferred from the stored weights.
    pub fn new(n: usize, layers: Vec<Layer>, allow_self_loops: bool) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidNetwork("no layers".into()));
        }
        if n == 0 {
            return Err(Error::InvalidNetwork("no nodes".into()));
        }
        for (l, layer) in layers.iter().enumerate() {
            if layer.n() != n {
                return Err(Error::Dimension(format!(
                    "layer {l} has {} nodes, expected {n}",
                    layer.n()
                )));
            }
            if !allow_self_loops && layer.has_self_loops() {
                return Err(Error::InvalidNetwork(format!(
                    "layer {l} has self-loops but they are disabled"
                )));
            }
        }
        let binary = layers.iter().all(Layer::is_binary);
        Ok(Self {
            n,
            layers,
            binary,
            allow_self_loops,
        })
    }

    /// Builds from dense symmetric matrices.
    pub fn from_dense(layers: &[DMatrix<f64>]) -> Result<Self> {
        let n = layers.first().map(|m| m.nrows()).unwrap_or(0);
        let layers = layers.iter().map(Layer::from_dense).collect::<Result<Vec<_>>>()?;
        Self::new(n, layers, true)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layer(&self, l: usize) -> &Layer {
        &self.layers[l]
    }

    /// Every stored weight is exactly one.
    pub fn is_binary(&self) -> bool {
        self.binary
    }

    pub fn allows_self_loops(&self) -> bool {
        self.allow_self_loops
    }

    pub fn binarized(&self) -> Self {
        Self {
            n: self.n,
            layers: self.layers.iter().map(Layer::binarized).collect(),
            binary: true,
            allow_self_loops: self.allow_self_loops,
        }
    }

    pub fn without_self_loops(&self) -> Self {
        Self {
            n: self.n,
            layers: self.layers.iter().map(Layer::without_self_loops).collect(),
            binary: self.binary,
            allow_self_loops: false,
        }
    }

    /// Relabels nodes: node `perm[i]` of `self` becomes node `i`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            n: self.n,
            layers: self.layers.iter().map(|l| l.permuted(perm)).collect(),
            binary: self.binary,
            allow_self_loops: self.allow_self_loops,
        }
    }

    pub fn to_dense(&self) -> Vec<DMatrix<f64>> {
        self.layers.iter().map(Layer::to_dense).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_are_mirrored_and_deduplicated() {
        let layer = Layer::from_edges(3, [(0, 1, 1.0), (1, 0, 1.0), (2, 2, 1.0)]).unwrap();
        assert_eq!(layer.nnz(), 3);
        assert_eq!(layer.get(0, 1), 1.0);
        assert_eq!(layer.get(1, 0), 1.0);
        assert_eq!(layer.get(2, 2), 1.0);
        assert_eq!(layer.degree(2), 1.0);
        assert_eq!(layer.upper_edges().count(), 2);
    }

    #[test]
    fn duplicate_weights_keep_max() {
        let layer = Layer::from_edges(2, [(0, 1, 2.0), (1, 0, 5.0), (0, 1, 3.0)]).unwrap();
        assert_eq!(layer.get(0, 1), 5.0);
        assert_eq!(layer.get(1, 0), 5.0);
        assert!(!layer.is_binary());
    }

    #[test]
    fn dense_round_trip() {
        let m = DMatrix::from_row_slice(3, 3, &[0., 1., 1., 1., 0., 0., 1., 0., 1.]);
        let layer = Layer::from_dense(&m).unwrap();
        assert_eq!(layer.to_dense(), m);
        let asym = DMatrix::from_row_slice(2, 2, &[0., 1., 0., 0.]);
        assert!(Layer::from_dense(&asym).is_err());
    }

    #[test]
    fn matvec_matches_dense() {
        let m = DMatrix::from_row_slice(3, 3, &[0., 2., 1., 2., 0., 0., 1., 0., 1.]);
        let layer = Layer::from_dense(&m).unwrap();
        let x = [1.0, -2.0, 0.5];
        let mut y = [0.0; 3];
        layer.matvec(&x, &mut y);
        let want = &m * nalgebra::DVector::from_column_slice(&x);
        assert_eq!(y.to_vec(), want.as_slice().to_vec());
    }

    #[test]
    fn permutation_relabels() {
        let layer = Layer::from_edges(3, [(0, 1, 1.0)]).unwrap();
        let p = layer.permuted(&[2, 0, 1]);
        assert_eq!(p.get(1, 2), 1.0);
        assert_eq!(p.get(0, 1), 0.0);
    }

    #[test]
    fn network_rejects_loops_when_disabled() {
        let layer = Layer::from_edges(2, [(0, 0, 1.0)]).unwrap();
        assert!(MultiLayerNetwork::new(2, vec![layer.clone()], false).is_err());
        let net = MultiLayerNetwork::new(2, vec![layer], true).unwrap();
        assert!(!net.without_self_loops().layer(0).has_self_loops());
    }
}
