//! SPSum, SPDSoS and SPSoS on the same networks across sparsity levels.
//!
//! cargo run --release --example compare_estimators

use mlmmsb::estimators::{estimate, Method};
use mlmmsb::metrics::hamming_error;
use mlmmsb::model::{generate_connectivity, generate_membership, sample_mlmmsb};

fn main() -> mlmmsb::Result<()> {
    let reps = 5;
    println!("{:>6} {:>8} {:>8} {:>8}", "rho", "SPSum", "SPDSoS", "SPSoS");
    for rho in [0.04, 0.08, 0.16, 0.32] {
        let mut totals = [0.0; 3];
        for r in 0..reps {
            let seed = 100 + r;
            let pi = generate_membership(200, 3, 50, seed)?;
            let conn = generate_connectivity(3, 30, seed)?.with_rho(rho)?;
            let net = sample_mlmmsb(&pi, &conn, seed)?;
            for (t, m) in totals.iter_mut().zip(Method::ALL) {
                *t += hamming_error(&estimate(&net, m, 3)?.pi_hat, &pi)?;
            }
        }
        let means = totals.map(|t| t / reps as f64);
        println!("{rho:>6} {:>8.4} {:>8.4} {:>8.4}", means[0], means[1], means[2]);
    }
    Ok(())
}
