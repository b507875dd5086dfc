//! Fit one estimator and inspect what it found.
//!
//! cargo run --release --example estimate_memberships

use mlmmsb::estimators::{estimate, Method};
use mlmmsb::metrics::{classify_nodes, error_report};
use mlmmsb::model::{generate_connectivity, generate_membership, sample_mlmmsb};

fn main() -> mlmmsb::Result<()> {
    let pi = generate_membership(400, 3, 80, 1)?;
    let conn = generate_connectivity(3, 30, 2)?.with_rho(0.15)?;
    let net = sample_mlmmsb(&pi, &conn, 3)?;

    let fit = estimate(&net, Method::SpDSoS, 3)?;
    println!("leading eigenvalues: {:?}", fit.eigenvalues.iter().map(|v| format!("{v:.1}")).collect::<Vec<_>>());
    println!("estimated pure nodes: {:?}", fit.vertices.indices);
    for &i in &fit.vertices.indices {
        println!("  node {i}: true row {:?}", pi.row(i));
    }

    let report = error_report(&fit.pi_hat, &pi)?;
    println!("hamming {:.4}, relative {:.4}", report.hamming, report.relative);
    println!("column matching: {:?}", report.best_permutation);

    let c = classify_nodes(&fit.pi_hat);
    println!(
        "sigma_mixed {:.3}, sigma_pure {:.3}, upsilon {:.3}",
        c.sigma_mixed, c.sigma_pure, c.upsilon
    );
    for i in 0..5 {
        let row: Vec<String> = fit.pi_hat.row(i).iter().map(|v| format!("{v:.2}")).collect();
        println!("node {i}: {} -> {}", row.join(" "), c.labels[i]);
    }
    Ok(())
}
