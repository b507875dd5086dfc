//! The noiseless case: eigenvector rows of the expected aggregate lie in a
//! simplex whose corners are the pure nodes.
//!
//! cargo run --release --example oracle_simplex

use mlmmsb::aggregate::top_k_eigen;
use mlmmsb::estimators::{estimate_oracle, population_aggregate, Method};
use mlmmsb::metrics::hamming_error;
use mlmmsb::model::{expected_adjacency, generate_connectivity, generate_membership};
use mlmmsb::simplex::{estimate_memberships, successive_projection};

fn main() -> mlmmsb::Result<()> {
    let pi = generate_membership(60, 3, 5, 4)?;
    let conn = generate_connectivity(3, 8, 5)?;
    let omega = expected_adjacency(&pi, &conn)?;

    let agg = population_aggregate(&omega, Method::SpDSoS)?;
    let emb = top_k_eigen(&agg, 3)?;
    let corners = successive_projection(emb.vectors(), 3)?;
    println!("corners picked: {:?} (pure nodes are 0..15)", corners.indices);
    println!("residual norms at pick time: {:?}", corners.selection_norms);
    let rec = estimate_memberships(&emb, &corners)?;
    println!("hamming error from the ideal simplex: {:.2e}", hamming_error(&rec.memberships, &pi)?);

    for m in Method::ALL {
        let fit = estimate_oracle(&omega, m, 3)?;
        println!("{m:<7} oracle hamming error {:.2e}", hamming_error(&fit.pi_hat, &pi)?);
    }
    Ok(())
}
