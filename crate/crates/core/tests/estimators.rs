mod common;

use common::{random_connectivity, random_membership_with_pure, rng};
use mlmmsb::estimators::{estimate, estimate_oracle, spdsos, spsos, spsum, Method};
use mlmmsb::metrics::hamming_error;
use mlmmsb::model::{expected_adjacency, generate_connectivity, generate_membership, sample_mlmmsb, ConnectivityStack};
use nalgebra::DMatrix;
use rand::Rng;
use mlmmsb::Error;
use rand::seq::SliceRandom;

#[test]
fn oracle_inputs_are_recovered_exactly() {
    for seed in 0..10 {
        let pi = random_membership_with_pure(80, 3, seed);
        let omega = expected_adjacency(&pi, &random_connectivity(3, 6, 0.5, seed + 100)).unwrap();
        for method in [Method::SpSum, Method::SpDSoS] {
            let fit = estimate_oracle(&omega, method, 3).unwrap();
            assert!(hamming_error(&fit.pi_hat, &pi).unwrap() < 1e-8, "{method} seed {seed}");
        }
        let biased = estimate_oracle(&omega, Method::SpSoS, 3).unwrap();
        assert!(hamming_error(&biased.pi_hat, &pi).unwrap() > 1e-6);
    }
}

/// Layers whose summed connectivity has its smallest eigenvalue growing
/// linearly in `l`: strong diagonal, weak off-diagonal.
fn assortative_stack(l: usize, rho: f64, seed: u64) -> ConnectivityStack {
    let mut r = rng(seed);
    let mats = (0..l)
        .map(|_| {
            let mut b = DMatrix::zeros(3, 3);
            for i in 0..3 {
                for j in i..3 {
                    let v = if i == j { 0.5 + 0.5 * r.random::<f64>() } else { 0.3 * r.random::<f64>() };
                    b[(i, j)] = v;
                    b[(j, i)] = v;
                }
            }
            b
        })
        .collect();
    ConnectivityStack::new(mats, rho).unwrap()
}

#[test]
fn dense_network_is_recovered_well() {
    for seed in 0..3 {
        let pi = generate_membership(300, 3, 75, seed).unwrap();
        let conn = assortative_stack(20, 0.9, seed + 10);
        let net = sample_mlmmsb(&pi, &conn, seed + 20).unwrap();
        let fit = spsum(&net, 3).unwrap();
        assert_eq!(fit.method, Method::SpSum);
        assert_eq!((fit.pi_hat.n(), fit.pi_hat.k()), (300, 3));
        assert!(hamming_error(&fit.pi_hat, &pi).unwrap() < 0.15);
    }
}

#[test]
fn uniform_connectivity_starves_the_sum() {
    // With i.i.d. uniform layers the K-th eigenvalue of sum_l B_l stays O(1),
    // so SPSum stays far from the truth even on dense networks while the
    // squared aggregates do not.
    let pi = generate_membership(300, 3, 75, 1).unwrap();
    let conn = generate_connectivity(3, 20, 2).unwrap().with_rho(0.9).unwrap();
    let net = sample_mlmmsb(&pi, &conn, 3).unwrap();
    let sum = hamming_error(&spsum(&net, 3).unwrap().pi_hat, &pi).unwrap();
    let dsos = hamming_error(&spdsos(&net, 3).unwrap().pi_hat, &pi).unwrap();
    assert!(dsos < 0.15 && sum > 2.0 * dsos, "SPSum {sum}, SPDSoS {dsos}");
}

#[test]
fn outputs_are_row_stochastic_and_labelled() {
    let pi = generate_membership(90, 3, 10, 4).unwrap();
    let conn = generate_connectivity(3, 5, 5).unwrap().with_rho(0.3).unwrap();
    let net = sample_mlmmsb(&pi, &conn, 6).unwrap();
    for (fit, method) in [
        (spsum(&net, 3).unwrap(), Method::SpSum),
        (spdsos(&net, 3).unwrap(), Method::SpDSoS),
        (spsos(&net, 3).unwrap(), Method::SpSoS),
    ] {
        assert_eq!(fit.method, method);
        assert_eq!(fit.eigenvalues.len(), 3);
        for i in 0..90 {
            let row = fit.pi_hat.row(i);
            assert!(row.iter().all(|&x| x >= 0.0));
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert_eq!(fit, estimate(&net, method, 3).unwrap());
    }
}

#[test]
fn k_larger_than_n() {
    let pi = generate_membership(6, 3, 1, 0).unwrap();
    let net = sample_mlmmsb(&pi, &generate_connectivity(3, 2, 0).unwrap(), 0).unwrap();
    assert!(matches!(spsum(&net, 7), Err(Error::Dimension(_))));
}

#[test]
fn weighted_layers_rejected_by_debiasing() {
    let w = nalgebra::DMatrix::from_row_slice(2, 2, &[0.0, 2.5, 2.5, 0.0]);
    let net = mlmmsb::model::MultiLayerNetwork::from_dense(&[w]).unwrap();
    assert!(matches!(spdsos(&net, 1), Err(Error::UnsupportedInput(_))));
    assert!(spsum(&net, 1).is_ok());
}

#[test]
fn relabelling_nodes_permutes_rows() {
    for seed in 0..5 {
        let pi = generate_membership(60, 3, 10, seed).unwrap();
        let conn = generate_connectivity(3, 8, seed).unwrap().with_rho(0.5).unwrap();
        let net = sample_mlmmsb(&pi, &conn, seed).unwrap();
        let mut perm: Vec<usize> = (0..60).collect();
        perm.shuffle(&mut rng(seed));
        let moved = net.permuted(&perm);
        for method in Method::ALL {
            let a = estimate(&net, method, 3).unwrap().pi_hat.permute_rows(&perm);
            let b = estimate(&moved, method, 3).unwrap().pi_hat;
            assert!(hamming_error(&b, &a).unwrap() < 1e-8, "{method} seed {seed}");
        }
    }
}

#[test]
fn debiasing_beats_the_sum_on_paired_draws() {
    let reps = 10;
    let (mut sum, mut dsos) = (0.0, 0.0);
    for r in 0..reps {
        let pi = generate_membership(200, 3, 50, 500 + r).unwrap();
        let conn = generate_connectivity(3, 50, 600 + r).unwrap().with_rho(0.1).unwrap();
        let net = sample_mlmmsb(&pi, &conn, 700 + r).unwrap();
        sum += hamming_error(&spsum(&net, 3).unwrap().pi_hat, &pi).unwrap();
        dsos += hamming_error(&spdsos(&net, 3).unwrap().pi_hat, &pi).unwrap();
    }
    assert!(dsos < sum, "SPDSoS {} vs SPSum {}", dsos / reps as f64, sum / reps as f64);
}
