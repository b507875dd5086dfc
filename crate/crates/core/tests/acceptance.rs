//! End-to-end acceptance criteria. Each criterion prints one line:
//! `[PASS]`, `[FAIL]` or `[SKIP]`, its number, a short name and the measured
//! numbers. Lines go straight to stderr so they show without `--nocapture`.

mod common;

use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::{brute_hamming, grid, random_binary_layers, random_connectivity, random_membership_with_pure, rng, spearman};
use mlmmsb::aggregate::{build, AggregateKind};
use mlmmsb::cli::resolve_dataset;
use mlmmsb::estimators::{estimate, estimate_oracle, Method};
use mlmmsb::experiments::{rate_slope_check, run_experiment, ExperimentResult, Preset, SweepParam};
use mlmmsb::io::{read_multiplex_edges, results_csv_string, ReadOptions};
use mlmmsb::metrics::{classify_nodes, estimate_k, hamming_error, q_fmean, q_fsum, Criterion};
use mlmmsb::model::{expected_adjacency, MembershipMatrix, MultiLayerNetwork};
use mlmmsb::simplex::successive_projection;
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

struct Report {
    failures: Vec<u32>,
}

impl Report {
    fn record(&mut self, id: u32, name: &str, elapsed: Duration, outcome: Outcome) {
        let (tag, detail) = match outcome {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => {
                self.failures.push(id);
                ("FAIL", d)
            }
            Outcome::Skip(d) => ("SKIP", d),
        };
        let line = format!("[{tag}] criterion {id}: {name} ({:.2}s) {detail}\n", elapsed.as_secs_f64());
        let _ = std::io::stderr().write_all(line.as_bytes());
    }
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn within(outcome: Outcome, elapsed: Duration, limit: Duration) -> Outcome {
    match outcome {
        Outcome::Pass(d) if elapsed > limit => Outcome::Fail(format!("{d}; over the {}s budget", limit.as_secs())),
        o => o,
    }
}

fn oracle_exactness() -> Outcome {
    let mut r = rng(2024);
    let mut worst: f64 = 0.0;
    for case in 0..20u64 {
        let n = r.random_range(10..=100);
        let l = r.random_range(1..=10);
        let rho = r.random_range(0.05..=1.0);
        let pi = random_membership_with_pure(n, 3, case);
        let conn = random_connectivity(3, l, rho, case + 500);
        let omega = expected_adjacency(&pi, &conn).unwrap();
        for m in [Method::SpSum, Method::SpDSoS] {
            match estimate_oracle(&omega, m, 3).and_then(|f| hamming_error(&f.pi_hat, &pi)) {
                Ok(h) => worst = worst.max(h),
                Err(e) => return Outcome::Fail(format!("case {case} {m}: {e}")),
            }
        }
    }
    check(worst < 1e-8, format!("max hamming {worst:.2e} over 20 configurations, SPSum and SPDSoS"))
}

fn debias_identity() -> Outcome {
    let mut r = rng(7);
    for case in 0..50u64 {
        let n = r.random_range(2..=40);
        let l = r.random_range(1..=6);
        let p = r.random::<f64>();
        let net = MultiLayerNetwork::from_dense(&random_binary_layers(n, l, p, case % 2 == 0, case)).unwrap();
        let s = build(&net, AggregateKind::DebiasedSos).unwrap().to_dense();
        let sos = build(&net, AggregateKind::Sos).unwrap().to_dense();
        for i in 0..n {
            if s[(i, i)] != 0.0 {
                return Outcome::Fail(format!("case {case}: diagonal {i} is {}", s[(i, i)]));
            }
            let deg: f64 = net.layers().iter().map(|a| a.degree(i)).sum();
            for j in 0..n {
                let want = if i == j { deg } else { 0.0 };
                if sos[(i, j)] - s[(i, j)] != want {
                    return Outcome::Fail(format!("case {case}: entry ({i}, {j})"));
                }
            }
        }
    }
    Outcome::Pass("50 networks, exact equality".into())
}

fn separable_recovery() -> Outcome {
    let mut r = rng(99);
    for case in 0..100 {
        let k = r.random_range(2..=6);
        let n = r.random_range(k..=60);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut r);
        let pure = &order[..k];
        let mut w = DMatrix::zeros(n, k);
        for i in 0..n {
            match pure.iter().position(|&p| p == i) {
                Some(c) => w[(i, c)] = 1.0,
                None => {
                    let v: Vec<f64> = (0..k).map(|_| r.random::<f64>() + 0.05).collect();
                    let s: f64 = v.iter().sum();
                    for c in 0..k {
                        w[(i, c)] = v[c] / s;
                    }
                }
            }
        }
        let c = loop {
            let c = DMatrix::from_fn(k, k, |_, _| r.random::<f64>() * 2.0 - 1.0);
            if c.clone().svd(false, false).singular_values.min() > 0.1 {
                break c;
            }
        };
        let got = match successive_projection(&(w * c), k) {
            Ok(v) => v.indices,
            Err(e) => return Outcome::Fail(format!("case {case}: {e}")),
        };
        let mut got_sorted = got.clone();
        got_sorted.sort_unstable();
        let mut want = pure.to_vec();
        want.sort_unstable();
        if got_sorted != want {
            return Outcome::Fail(format!("case {case}: picked {got:?}, pure rows {want:?}"));
        }
    }
    Outcome::Pass("100 instances, pure rows recovered exactly".into())
}

fn permutation_search() -> Outcome {
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    let random = |r: &mut rand_chacha::ChaCha8Rng, n: usize, k: usize| {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let v: Vec<f64> = (0..k).map(|_| r.random::<f64>() + 1e-3).collect();
                let s: f64 = v.iter().sum();
                v.iter().map(|x| x / s).collect()
            })
            .collect();
        MembershipMatrix::from_rows_lenient(&rows, 1e-9).unwrap()
    };
    for _ in 0..100 {
        let k = r.random_range(1..=4);
        let n = r.random_range(1..=30);
        let pi = random(&mut r, n, k);
        let hat = random(&mut r, n, k);
        let got = hamming_error(&hat, &pi).unwrap();
        worst = worst.max((got - brute_hamming(&grid(hat.matrix()), &grid(pi.matrix()))).abs());
    }
    check(worst <= 1e-12, format!("max deviation {worst:.2e} over 100 pairs"))
}

fn modularity_truths() -> Outcome {
    let mut a = DMatrix::zeros(6, 6);
    for (i, j) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)] {
        a[(i, j)] = 1.0;
        a[(j, i)] = 1.0;
    }
    let net = MultiLayerNetwork::from_dense(&[a]).unwrap();
    let pure = MembershipMatrix::from_labels(&[0, 0, 0, 1, 1, 1], 2).unwrap();
    let uniform = MembershipMatrix::new(DMatrix::from_element(6, 2, 0.5)).unwrap();
    let one = MembershipMatrix::new(DMatrix::from_element(6, 1, 1.0)).unwrap();
    let (fs, fm) = (q_fsum(&net, &pure).unwrap(), q_fmean(&net, &pure).unwrap());
    let zeros = [
        q_fsum(&net, &uniform).unwrap(),
        q_fmean(&net, &uniform).unwrap(),
        q_fsum(&net, &one).unwrap(),
        q_fmean(&net, &one).unwrap(),
    ];
    check(
        (fs - 0.5).abs() <= 1e-12 && (fm - 0.5).abs() <= 1e-12 && zeros.iter().all(|&z| z == 0.0),
        format!("triangles q_fsum {fs}, q_fmean {fm}; uniform and K=1 {zeros:?}"),
    )
}

fn means(res: &ExperimentResult, m: Method) -> Vec<f64> {
    res.series(m).iter().map(|c| c.hamming_mean()).collect()
}

fn scaled_experiment_one(res: &ExperimentResult) -> Outcome {
    let rho = &res.config.values;
    let (d, s, sum) = (means(res, Method::SpDSoS), means(res, Method::SpSoS), means(res, Method::SpSum));
    let rho_d = spearman(rho, &d);
    let rho_s = spearman(rho, &s);
    let trend = rho_d <= -0.8 && rho_s <= -0.8;
    let strict = d.windows(2).all(|w| w[1] < w[0]) && s.windows(2).all(|w| w[1] < w[0]);
    let mut ordering = true;
    let mut slack = Vec::new();
    for i in 0..rho.len() {
        let se = [Method::SpDSoS, Method::SpSoS, Method::SpSum]
            .iter()
            .map(|&m| res.cell(m, i).unwrap().hamming_se())
            .fold(0.0, f64::max);
        ordering &= d[i] <= s[i] + se && s[i] + se <= sum[i] + 2.0 * se;
        slack.push(format!("{:.3}/{:.3}/{:.3}±{:.3}", d[i], s[i], sum[i], se));
    }
    check(
        trend && ordering,
        format!(
            "spearman SPDSoS {rho_d:.2}, SPSoS {rho_s:.2}, strictly decreasing {strict}; DSoS/SoS/Sum±SE per rho [{}]",
            slack.join(", ")
        ),
    )
}

fn rate_check() -> Outcome {
    let res = run_experiment(&Preset::Exp2Scaled.config(7)).unwrap();
    let slope = rate_slope_check(&res, SweepParam::Layers, Method::SpDSoS).unwrap();
    check((-0.8..=-0.2).contains(&slope), format!("SPDSoS log-log slope in L = {slope:.3}"))
}

fn determinism(exp1: &ExperimentResult) -> Outcome {
    let pooled = |threads: usize, preset: Preset, reps: Option<usize>| {
        let mut cfg = preset.config(7);
        if let Some(r) = reps {
            cfg.repetitions = r;
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| results_csv_string(&run_experiment(&cfg).unwrap()))
    };
    let reference = results_csv_string(exp1);
    let single = pooled(1, Preset::Exp1Scaled, None);
    let three = pooled(3, Preset::Exp1Scaled, None);
    let other_a = pooled(1, Preset::Exp3Scaled, Some(3));
    let other_b = pooled(4, Preset::Exp3Scaled, Some(3));
    check(
        reference == single && single == three && other_a == other_b,
        "exp1-scaled at default, 1 and 3 threads; exp3-scaled at 1 and 4 threads".into(),
    )
}

fn data_dir() -> PathBuf {
    std::env::var_os("MLMMSB_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data"))
}

fn real_data() -> Outcome {
    let dir = data_dir();
    let Ok(path) = resolve_dataset("lazega", &dir) else {
        return Outcome::Skip(format!("Lazega Law Firm edge list not found under {}", dir.display()));
    };
    let (net, _) = read_multiplex_edges(&path, ReadOptions::default()).unwrap();
    let shape = (net.n(), net.num_layers());
    let sel = estimate_k(&net, Method::SpSum, 2..=6, Criterion::FuzzySum).unwrap();
    let fit = estimate(&net, Method::SpSum, 3).unwrap();
    let c = classify_nodes(&fit.pi_hat);
    let ok = shape == (71, 3)
        && sel.best_k == 3
        && (sel.best_score - 0.2025).abs() <= 0.01
        && (c.sigma_mixed - 0.1408).abs() <= 0.02
        && (c.sigma_pure - 0.4930).abs() <= 0.02
        && (c.upsilon - 0.7276).abs() <= 0.02;
    check(
        ok,
        format!(
            "n = {}, L = {}; (K, Q_fsum) = ({}, {:.4}); sigma_mixed {:.4}, sigma_pure {:.4}, upsilon {:.4}",
            shape.0, shape.1, sel.best_k, sel.best_score, c.sigma_mixed, c.sigma_pure, c.upsilon
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let mut report = Report { failures: Vec::new() };
    let timed = |f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let o = f();
        (o, t.elapsed())
    };

    let (o, t) = timed(&oracle_exactness);
    report.record(1, "oracle exactness", t, within(o, t, Duration::from_secs(10)));
    let (o, t) = timed(&debias_identity);
    report.record(2, "debias identity", t, within(o, t, Duration::from_secs(5)));
    let (o, t) = timed(&separable_recovery);
    report.record(3, "separable recovery", t, within(o, t, Duration::from_secs(5)));
    let (o, t) = timed(&permutation_search);
    report.record(4, "permutation search", t, o);
    let (o, t) = timed(&modularity_truths);
    report.record(5, "modularity ground truths", t, o);

    let start = Instant::now();
    let exp1 = run_experiment(&Preset::Exp1Scaled.config(7)).unwrap();
    let o = scaled_experiment_one(&exp1);
    let t = start.elapsed();
    report.record(6, "scaled experiment 1 trends", t, within(o, t, Duration::from_secs(300)));

    let (o, t) = timed(&rate_check);
    report.record(7, "layer rate slope", t, within(o, t, Duration::from_secs(300)));
    let (o, t) = timed(&|| determinism(&exp1));
    report.record(8, "determinism", t, o);
    let (o, t) = timed(&real_data);
    report.record(9, "real-data reproduction", t, o);

    assert!(report.failures.is_empty(), "failed criteria: {:?}", report.failures);
}
