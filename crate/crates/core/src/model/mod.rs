//! Model objects and the multi-layer mixed-membership sampler.
//!
//! Layer `l` of a network drawn from `(Pi, {B_l}, rho)` has independent
//! Bernoulli entries with mean `Omega_l = rho * Pi * B_l * Pi^T`.

mod connectivity;
mod membership;
mod network;

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

pub use connectivity::{generate_connectivity, ConnectivityStack};
pub use membership::{
    generate_membership, three_community_mixed_row, MembershipMatrix, ROW_SUM_TOL,
};
pub use network::{Layer, MultiLayerNetwork};

use crate::error::{Error, Result};
use crate::seed;

/// The per-layer edge probability matrices `Omega_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationStack {
    layers: Vec<DMatrix<f64>>,
    rho: f64,
}

impl ExpectationStack {
    pub fn n(&self) -> usize {
        self.layers[0].nrows()
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn layers(&self) -> &[DMatrix<f64>] {
        &self.layers
    }

    /// `sum_l Omega_l`.
    pub fn sum(&self) -> DMatrix<f64> {
        let n = self.n();
        self.layers.iter().fold(DMatrix::zeros(n, n), |acc, m| acc + m)
    }

    /// `sum_l Omega_l^2`.
    pub fn sum_of_squares(&self) -> DMatrix<f64> {
        let n = self.n();
        self.layers
            .iter()
            .fold(DMatrix::zeros(n, n), |acc, m| acc + m * m)
    }

    /// `sum_l E[D_l]`, the expected degree of each node summed over layers.
    pub fn expected_degree_sum(&self) -> Vec<f64> {
        let n = self.n();
        let mut d = vec![0.0; n];
        for m in &self.layers {
            for i in 0..n {
                d[i] += m.row(i).sum();
            }
        }
        d
    }
}

/// `Omega_l = rho * Pi * B_l * Pi^T` for every layer.
pub fn expected_adjacency(pi: &MembershipMatrix, conn: &ConnectivityStack) -> Result<ExpectationStack> {
    if pi.k() != conn.k() {
        return Err(Error::Dimension(format!(
            "membership has K = {}, connectivity has K = {}",
            pi.k(),
            conn.k()
        )));
    }
    let p = pi.matrix();
    let pt = p.transpose();
    let layers = conn
        .matrices()
        .iter()
        .map(|b| {
            let mut omega = (p * b * &pt) * conn.rho();
            symmetrize_and_clip(&mut omega, conn.rho());
            omega
        })
        .collect();
    Ok(ExpectationStack {
        layers,
        rho: conn.rho(),
    })
}

// Rounding in the triple product can leave tiny asymmetries or values a hair
// outside [0, rho].
fn symmetrize_and_clip(m: &mut DMatrix<f64>, rho: f64) {
    let n = m.nrows();
    for i in 0..n {
        for j in i..n {
            let v = (0.5 * (m[(i, j)] + m[(j, i)])).clamp(0.0, rho);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

/// Options for [`sample_network`].
#[derive(Debug, Clone, Copy)]
pub struct SampleOptions {
    /// Draw diagonal entries with probability `Omega_l(i, i)`; otherwise the
    /// diagonal is zero.
    pub self_loops: bool,
}

impl Default for SampleOptions {
    fn default() -> Self {
        Self { self_loops: true }
    }
}

/// Draws a network with self-loops enabled. See [`sample_network`].
pub fn sample_mlmmsb(pi: &MembershipMatrix, conn: &ConnectivityStack, seed: u64) -> Result<MultiLayerNetwork> {
    sample_network(pi, conn, seed, SampleOptions::default())
}

/// Draws each upper-triangular entry of each layer independently from
/// `Bernoulli(Omega_l(i, j))` and mirrors it. Layer `l` uses its own stream
/// derived from `(seed, l)`, so layers are sampled in parallel.
pub fn sample_network(
    pi: &MembershipMatrix,
    conn: &ConnectivityStack,
    seed: u64,
    opts: SampleOptions,
) -> Result<MultiLayerNetwork> {
    if pi.k() != conn.k() {
        return Err(Error::Dimension(format!(
            "membership has K = {}, connectivity has K = {}",
            pi.k(),
            conn.k()
        )));
    }
    if pi.n() < pi.k() {
        return Err(Error::Dimension(format!("n = {} < K = {}", pi.n(), pi.k())));
    }
    if conn.is_nearly_rank_deficient() {
        log::warn!(
            "sum of connectivity matrices is nearly rank deficient (|lambda_K| = {:.3e})",
            conn.sum_min_abs_eigenvalue()
        );
    }
    let n = pi.n();
    let p = pi.matrix();
    let rho = conn.rho();
    let layers = conn
        .matrices()
        .par_iter()
        .enumerate()
        .map(|(l, b)| {
            let mut rng = seed::stream(seed, &[seed::TAG_NETWORK, seed::TAG_LAYER, l as u64]);
            let pb = p * b;
            let mut edges = Vec::new();
            for i in 0..n {
                let start = if opts.self_loops { i } else { i + 1 };
                let left = pb.row(i);
                for j in start..n {
                    let prob = rho * left.dot(&p.row(j));
                    if rng.random::<f64>() < prob {
                        edges.push((i, j, 1.0));
                    }
                }
            }
            Layer::from_edges(n, edges)
        })
        .collect::<Result<Vec<_>>>()?;
    MultiLayerNetwork::new(n, layers, opts.self_loops)
}
