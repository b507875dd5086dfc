//! Read a multiplex edge list, estimate memberships, save them and summarize
//! how mixed the nodes are.
//!
//! cargo run --release --example classify_nodes -- path/to/file.edges 3
//!
//! Without arguments a small synthetic network is written and used.

use std::path::PathBuf;

use mlmmsb::estimators::{estimate, Method};
use mlmmsb::io::{read_membership_csv, read_multiplex_edges, write_membership_csv, write_multiplex_edges, NodeMap, ReadOptions};
use mlmmsb::metrics::{classify_nodes, q_fmean, q_fsum, NodeLabel};
use mlmmsb::model::{generate_connectivity, generate_membership, sample_mlmmsb};

fn main() -> mlmmsb::Result<()> {
    let dir = tempfile::tempdir().expect("temp dir");
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (path, k) = match args.as_slice() {
        [p, k, ..] => (PathBuf::from(p), k.parse().expect("K must be an integer")),
        [p] => (PathBuf::from(p), 3),
        [] => {
            let pi = generate_membership(150, 3, 30, 21)?;
            let conn = generate_connectivity(3, 10, 22)?.with_rho(0.4)?;
            let net = sample_mlmmsb(&pi, &conn, 23)?.without_self_loops();
            let path = dir.path().join("synthetic.edges");
            write_multiplex_edges(&net, &NodeMap::identity(net.n()), &path)?;
            (path, 3)
        }
    };

    let (net, map) = read_multiplex_edges(&path, ReadOptions::default())?;
    println!("{}: n = {}, L = {}", path.display(), net.n(), net.num_layers());
    let fit = estimate(&net, Method::SpSum, k)?;
    println!("Q_fsum = {:.4}, Q_fmean = {:.4}", q_fsum(&net, &fit.pi_hat)?, q_fmean(&net, &fit.pi_hat)?);

    let out = dir.path().join("pi_hat.csv");
    write_membership_csv(&fit.pi_hat, &map, &out)?;
    let (ids, pi_hat) = read_membership_csv(&out)?;
    let c = classify_nodes(&pi_hat);
    for label in [NodeLabel::HighlyMixed, NodeLabel::Neutral, NodeLabel::HighlyPure] {
        println!("{:<13} {}", label.as_str(), c.count(label));
    }
    println!("sigma_mixed {:.4}, sigma_pure {:.4}, upsilon {:.4}", c.sigma_mixed, c.sigma_pure, c.upsilon);
    let mixed: Vec<u64> = (0..pi_hat.n())
        .filter(|&i| c.labels[i] == NodeLabel::HighlyMixed)
        .map(|i| ids.original(i))
        .take(10)
        .collect();
    println!("some highly mixed nodes (original ids): {mixed:?}");
    Ok(())
}
