//! Mixed-membership community detection for multi-layer networks.
//!
//! The crate covers the whole workflow around the multi-layer mixed
//! membership stochastic block model:
//!
//! - [`model`]: membership and connectivity generators, the expected
//!   adjacency and a seeded network sampler;
//! - [`aggregate`]: the sum, debiased sum of squares and sum of squares of the
//!   layers, plus their leading eigenpairs;
//! - [`simplex`]: successive projection and membership reconstruction;
//! - [`estimators`]: the SPSum, SPDSoS and SPSoS pipelines;
//! - [`metrics`]: permutation-matched errors, fuzzy modularities, purity
//!   indices and selection of `K`;
//! - [`experiments`]: the simulation harness and assumption diagnostics;
//! - [`io`] and [`cli`]: file formats, charts and the command-line front end.
//!
//! ```
//! use mlmmsb::estimators::{estimate, Method};
//! use mlmmsb::metrics::hamming_error;
//! use mlmmsb::model::{generate_connectivity, generate_membership, sample_mlmmsb};
//!
//! let pi = generate_membership(120, 3, 30, 1).unwrap();
//! let conn = generate_connectivity(3, 20, 2).unwrap().with_rho(0.6).unwrap();
//! let net = sample_mlmmsb(&pi, &conn, 3).unwrap();
//! let fit = estimate(&net, Method::SpDSoS, 3).unwrap();
//! assert!(hamming_error(&fit.pi_hat, &pi).unwrap() < 0.5);
//! ```

pub mod aggregate;
pub mod cli;
pub mod error;
pub mod estimators;
pub mod experiments;
pub mod io;
pub mod metrics;
pub mod model;
pub mod seed;
pub mod simplex;

pub use error::{Error, Result};
