//! Choose the number of communities by fuzzy modularity.
//!
//! cargo run --release --example select_k

use mlmmsb::estimators::Method;
use mlmmsb::metrics::{estimate_k, Criterion};
use mlmmsb::model::{ConnectivityStack, MembershipMatrix, sample_mlmmsb};
use nalgebra::DMatrix;

fn main() -> mlmmsb::Result<()> {
    // Assortative layers make the modularity peak at the true K.
    let k = 4;
    let labels: Vec<usize> = (0..240).map(|i| i % k).collect();
    let pi = MembershipMatrix::from_labels(&labels, k)?;
    let b = DMatrix::from_fn(k, k, |i, j| if i == j { 0.6 } else { 0.1 });
    let conn = ConnectivityStack::new(vec![b; 6], 0.5)?;
    let net = sample_mlmmsb(&pi, &conn, 9)?;

    for criterion in [Criterion::FuzzySum, Criterion::FuzzyMean] {
        let sel = estimate_k(&net, Method::SpSum, 2..=6, criterion)?;
        println!("{}:", criterion.name());
        for c in &sel.candidates {
            match &c.outcome {
                Ok(s) => println!("  K = {}: {s:.4}", c.k),
                Err(e) => println!("  K = {}: failed ({e})", c.k),
            }
        }
        println!("  chosen ({}, {:.4})", sel.best_k, sel.best_score);
    }
    Ok(())
}
