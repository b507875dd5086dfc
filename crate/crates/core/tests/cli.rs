use std::path::Path;
use std::process::{Command, Output};

fn mlmmsb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mlmmsb")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn simulate(dir: &Path) {
    let d = dir.to_str().unwrap();
    let o = mlmmsb(&["simulate", "--n", "90", "-L", "8", "--rho", "0.5", "--n0", "15", "--seed", "3", "--out", d, "--no-self-loops"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn usage_errors() {
    let o = mlmmsb(&["bogus"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bogus"));
    assert_eq!(mlmmsb(&["classify", "--pi", "x", "--frob"]).status.code(), Some(1));
    assert_eq!(mlmmsb(&[]).status.code(), Some(1));
    assert_eq!(mlmmsb(&["experiment", "--preset", "exp9"]).status.code(), Some(1));
    let help = mlmmsb(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("key = value"));
}

#[test]
fn simulate_estimate_classify() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path());
    let edges = dir.path().join("network.edges");
    let pi = dir.path().join("pi_hat.csv");
    let o = mlmmsb(&["estimate", "--data", edges.to_str().unwrap(), "--method", "spdsos", "-k", "3", "--out", pi.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("sigma_mixed"));
    let map = std::fs::read_to_string(dir.path().join("pi_hat.nodes.csv")).unwrap();
    assert!(map.starts_with("index,original_id\n1,1\n"));
    let header = std::fs::read_to_string(&pi).unwrap();
    assert!(header.starts_with("node,pi_1,pi_2,pi_3,home,label\n"));

    let c = mlmmsb(&["classify", "--pi", pi.to_str().unwrap()]);
    assert_eq!(c.status.code(), Some(0));
    let report = stdout(&c);
    assert!(report.contains("upsilon"));
    assert!(stdout(&o).contains(report.lines().last().unwrap()));
}

#[test]
fn k_above_n_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path());
    let edges = dir.path().join("network.edges");
    let o = mlmmsb(&["estimate", "--data", edges.to_str().unwrap(), "-k", "500", "--out", dir.path().join("x.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("dimension"), "{}", stderr(&o));
}

#[test]
fn missing_and_malformed_data() {
    let dir = tempfile::tempdir().unwrap();
    let o = mlmmsb(&["estimate", "--data", "lazega", "--data-dir", dir.path().to_str().unwrap(), "-k", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let bad = dir.path().join("bad.edges");
    std::fs::write(&bad, "1 1 2\n1 one 2\n").unwrap();
    let o = mlmmsb(&["select-k", "--data", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.edges:2"), "{}", stderr(&o));
}

#[test]
fn keep_weights_refuses_debiasing() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path());
    let edges = dir.path().join("network.edges");
    let o = mlmmsb(&["estimate", "--data", edges.to_str().unwrap(), "--keep-weights", "--method", "spdsos", "-k", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let o = mlmmsb(&["select-k", "--data", edges.to_str().unwrap(), "--keep-weights", "--range", "2..4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn select_k_prints_a_table_and_the_winner() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path());
    let edges = dir.path().join("network.edges");
    let o = mlmmsb(&["select-k", "--data", edges.to_str().unwrap(), "--method", "spsum", "--range", "2..4", "--criterion", "fsum"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with('(') && last.ends_with(')'), "{last}");
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn experiments_are_byte_identical_across_threads() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let run = |dir: &Path, threads: &str| {
        let o = mlmmsb(&["--threads", threads, "experiment", "--preset", "exp4-scaled", "--reps", "2", "--seed", "7", "--out-dir", dir.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    };
    run(a.path(), "1");
    run(b.path(), "3");
    for f in ["exp4-scaled_results.csv", "exp4-scaled_raw.csv", "exp4-scaled_hamming.svg", "exp4-scaled_relative.svg"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        assert_eq!(x, std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn config_driven_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tiny.cfg");
    std::fs::write(&cfg, "n = 60\nL = 4\nrho = 0.5\nn0 = 5\nsweep = L\nvalues = 2, 4\nrepetitions = 2\nmethods = spsum, spdsos\n").unwrap();
    let o = mlmmsb(&["experiment", "--config", cfg.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("tiny_results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    std::fs::write(&cfg, "n = 60\n").unwrap();
    let o = mlmmsb(&["experiment", "--config", cfg.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
