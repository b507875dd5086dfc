//! A small simulation study with CSV and SVG output.
//!
//! cargo run --release --example run_experiment -- [out_dir]

use std::path::PathBuf;

use mlmmsb::estimators::Method;
use mlmmsb::experiments::{rate_slope_check, run_experiment, Preset, SweepParam};
use mlmmsb::io::{render_line_chart, write_results_csv, ChartOptions, Series};

fn main() -> mlmmsb::Result<()> {
    let out_dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let mut cfg = Preset::Exp2Scaled.config(7);
    cfg.repetitions = 5;
    let result = run_experiment(&cfg)?;

    for m in &cfg.methods {
        let row: Vec<String> = result
            .series(*m)
            .iter()
            .map(|c| format!("{:.3}±{:.3}", c.hamming_mean(), c.hamming_se()))
            .collect();
        println!("{:<7} {}", m.name(), row.join("  "));
    }
    let slope = rate_slope_check(&result, SweepParam::Layers, Method::SpDSoS)?;
    println!("log-log slope of SPDSoS error in L: {slope:.3}");

    let csv = out_dir.join("exp2_small.csv");
    write_results_csv(&result, &csv)?;
    let series: Vec<Series> = cfg
        .methods
        .iter()
        .map(|&m| {
            let pts = result.series(m).iter().map(|c| (c.sweep_value, c.hamming_mean())).collect();
            Series::new(m.name(), pts)
        })
        .collect();
    let svg = out_dir.join("exp2_small.svg");
    let opts = ChartOptions {
        title: "Hamming error vs number of layers".into(),
        x_label: "L".into(),
        y_label: "mean Hamming error".into(),
        log_x: true,
        log_y: true,
        ..ChartOptions::default()
    };
    render_line_chart(&series, &opts, &svg)?;
    println!("wrote {} and {}", csv.display(), svg.display());
    Ok(())
}
