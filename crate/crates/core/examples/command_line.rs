//! Drive the command-line front end in-process.
//!
//! cargo run --release --example command_line

use mlmmsb::cli::cli_main;

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let d = dir.path().to_str().expect("utf-8 path");
    let runs: Vec<Vec<String>> = vec![
        format!("mlmmsb simulate --n 150 -L 12 --rho 0.4 --n0 30 --seed 5 --out {d} --no-self-loops"),
        format!("mlmmsb estimate --data {d}/network.edges --method spdsos -k 3 --out {d}/pi_hat.csv"),
        format!("mlmmsb select-k --data {d}/network.edges --method spsum --range 2..5 --criterion fmean"),
        format!("mlmmsb classify --pi {d}/pi_hat.csv"),
        format!("mlmmsb --threads 2 experiment --preset exp4-scaled --reps 2 --seed 1 --out-dir {d}"),
        format!("mlmmsb estimate --data {d}/network.edges -k 500"),
    ]
    .into_iter()
    .map(|s| s.split_whitespace().map(String::from).collect())
    .collect();
    for argv in runs {
        println!("$ {}", argv.join(" "));
        let code = cli_main(&argv);
        println!("[exit {code}]\n");
    }
}
