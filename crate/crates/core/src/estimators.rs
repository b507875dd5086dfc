//! The three end-to-end spectral estimators.
//!
//! Each one builds an aggregate matrix, takes its top-`K` eigenvectors, finds
//! `K` pure nodes by successive projection and reconstructs the memberships.
//! They differ only in the aggregate:
//!
//! | method   | aggregate                      |
//! |----------|--------------------------------|
//! | SPSum    | `sum_l A_l`                    |
//! | SPDSoS   | `sum_l (A_l^2 - D_l)`          |
//! | SPSoS    | `sum_l A_l^2`                  |

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::aggregate::{self, top_k_eigen, AggregateKind, AggregateMatrix, DegeneracyWarning};
use crate::error::{Error, Result};
use crate::model::{ExpectationStack, MembershipMatrix, MultiLayerNetwork};
use crate::simplex::{estimate_memberships, successive_projection, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    SpSum,
    SpDSoS,
    SpSoS,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::SpSum, Method::SpDSoS, Method::SpSoS];

    pub fn name(self) -> &'static str {
        match self {
            Method::SpSum => "SPSum",
            Method::SpDSoS => "SPDSoS",
            Method::SpSoS => "SPSoS",
        }
    }

    pub fn aggregate_kind(self) -> AggregateKind {
        match self {
            Method::SpSum => AggregateKind::Sum,
            Method::SpDSoS => AggregateKind::DebiasedSos,
            Method::SpSoS => AggregateKind::Sos,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "spsum" | "sum" => Ok(Method::SpSum),
            "spdsos" | "dsos" => Ok(Method::SpDSoS),
            "spsos" | "sos" => Ok(Method::SpSoS),
            other => Err(Error::Config(format!(
                "unknown method '{other}' (expected spsum, spdsos or spsos)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    pub degeneracy: Option<DegeneracyWarning>,
    /// Nodes whose reconstructed row was all non-positive and set uniform.
    pub zero_rows: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult {
    pub method: Method,
    pub pi_hat: MembershipMatrix,
    pub vertices: VertexSet,
    pub eigenvalues: Vec<f64>,
    pub diagnostics: Diagnostics,
}

/// Runs `method` on an observed network.
pub fn estimate(net: &MultiLayerNetwork, method: Method, k: usize) -> Result<EstimationResult> {
    if k == 0 || k > net.n() {
        return Err(Error::Dimension(format!("K = {k} with n = {}", net.n())));
    }
    let agg = aggregate::build(net, method.aggregate_kind())?;
    estimate_from_aggregate(&agg, method, k)
}

pub fn spsum(net: &MultiLayerNetwork, k: usize) -> Result<EstimationResult> {
    estimate(net, Method::SpSum, k)
}

pub fn spdsos(net: &MultiLayerNetwork, k: usize) -> Result<EstimationResult> {
    estimate(net, Method::SpDSoS, k)
}

pub fn spsos(net: &MultiLayerNetwork, k: usize) -> Result<EstimationResult> {
    estimate(net, Method::SpSoS, k)
}

/// Eigendecomposition, vertex hunt and reconstruction on a prebuilt aggregate.
pub fn estimate_from_aggregate(
    agg: &AggregateMatrix,
    method: Method,
    k: usize,
) -> Result<EstimationResult> {
    let emb = top_k_eigen(agg, k)?;
    let vertices = successive_projection(emb.vectors(), k)?;
    let rec = estimate_memberships(&emb, &vertices)?;
    Ok(EstimationResult {
        method,
        pi_hat: rec.memberships,
        vertices,
        eigenvalues: emb.eigenvalues().to_vec(),
        diagnostics: Diagnostics {
            degeneracy: emb.degeneracy(),
            zero_rows: rec.zero_rows,
        },
    })
}

/// The population aggregate each method would see with infinite data:
/// `Omega_sum`, `sum_l Omega_l^2`, and `sum_l Omega_l^2 + sum_l E[D_l]`.
pub fn population_aggregate(omega: &ExpectationStack, method: Method) -> Result<AggregateMatrix> {
    let m = match method {
        Method::SpSum => omega.sum(),
        Method::SpDSoS => omega.sum_of_squares(),
        Method::SpSoS => {
            let d = omega.expected_degree_sum();
            omega.sum_of_squares() + DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d))
        }
    };
    AggregateMatrix::from_dense(method.aggregate_kind(), m)
}

/// Oracle mode: runs `method` on its population aggregate. SPSum and SPDSoS
/// recover `Pi` exactly up to a column permutation; SPSoS does not, because
/// the expected degrees bias the diagonal.
pub fn estimate_oracle(omega: &ExpectationStack, method: Method, k: usize) -> Result<EstimationResult> {
    let agg = population_aggregate(omega, method)?;
    estimate_from_aggregate(&agg, method, k)
}
