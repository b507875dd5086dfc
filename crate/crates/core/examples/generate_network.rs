//! Draw a multi-layer network and compare it with its expectation.
//!
//! cargo run --release --example generate_network

use mlmmsb::experiments::compute_diagnostics;
use mlmmsb::model::{expected_adjacency, generate_connectivity, generate_membership, sample_mlmmsb};

fn main() -> mlmmsb::Result<()> {
    let (n, k, layers, n0) = (300, 3, 20, 60);
    let pi = generate_membership(n, k, n0, 11)?;
    let conn = generate_connectivity(k, layers, 12)?.with_rho(0.3)?;
    let net = sample_mlmmsb(&pi, &conn, 13)?;

    println!("n = {}, L = {}, pure nodes = {}", net.n(), net.num_layers(), pi.pure_nodes().len());
    println!("smallest singular value of Pi: {:.3}", pi.min_singular_value());
    println!("|lambda_K| of sum_l B_l: {:.3}", conn.sum_min_abs_eigenvalue());
    for (l, layer) in net.layers().iter().enumerate().take(5) {
        let edges = layer.upper_edges().count();
        println!("layer {:>2}: {edges:>5} edges, mean degree {:.2}", l + 1, layer.total_degree() / n as f64);
    }

    let omega = expected_adjacency(&pi, &conn)?;
    let expected: f64 = omega.expected_degree_sum().iter().sum::<f64>() / n as f64;
    let observed: f64 = net.layers().iter().map(|l| l.total_degree()).sum::<f64>() / n as f64;
    println!("degree summed over layers: expected {expected:.2}, observed {observed:.2}");

    let d = compute_diagnostics(&net, &omega)?;
    println!("tau = {:.1}, tau_tilde = {:.1}", d.tau, d.tau_tilde);
    println!(
        "sparsity conditions hold: sum {}, squared {}",
        d.sum_condition_holds, d.squared_condition_holds
    );
    Ok(())
}
