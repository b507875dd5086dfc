//! The `mlmmsb` command-line front end.
//!
//! Exit status is 0 on success, 1 on a usage error and 2 when the input data
//! cannot be used.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::estimators::{estimate, Method};
use crate::experiments::{run_experiment, ExperimentResult, Preset};
use crate::io::{
    self, read_membership_csv, read_multiplex_edges, render_line_chart, write_membership_csv,
    write_multiplex_edges, write_raw_csv, write_results_csv, ChartOptions, NodeMap, ReadOptions,
    Series,
};
use crate::metrics::{classify_nodes, estimate_k, Criterion, NodeClassification, NodeLabel};
use crate::model::{generate_connectivity, generate_membership, sample_network, MembershipMatrix, SampleOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

const CONFIG_HELP: &str = "\
Config files (experiment --config) are flat `key = value` lines; `#` starts a comment.
Keys: preset, n, L, rho, n0, K, pure_fraction, sweep (rho|L|n|n0),
values (comma separated, increasing), repetitions, seed, methods
(comma separated: spsum, spdsos, spsos), self_loops (true|false).
Without `preset`, n, L, rho, n0, sweep and values are required; with it,
the other keys override the preset.

Datasets (--data) are either a path to a multiplex edge list
(`layer u v [weight]` per line, `#` comments) or one of the names
lazega, cs-aarhus, celegans, fao-trade, looked up in --data-dir.";

#[derive(Debug, Parser)]
#[command(name = "mlmmsb", version, about = "Mixed-membership community detection for multi-layer networks", after_help = CONFIG_HELP)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a network and save it with its true memberships.
    Simulate(SimulateArgs),
    /// Estimate memberships of a dataset.
    Estimate(EstimateArgs),
    /// Run a simulation study.
    Experiment(ExperimentArgs),
    /// Pick the number of communities by fuzzy modularity.
    SelectK(SelectKArgs),
    /// Summarize how mixed the nodes of a membership table are.
    Classify(ClassifyArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    n: usize,
    #[arg(short = 'k', long = "k", default_value_t = 3)]
    k: usize,
    #[arg(short = 'L', long = "layers")]
    layers: usize,
    #[arg(long)]
    rho: f64,
    /// Pure nodes per community.
    #[arg(long)]
    n0: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory; receives network.edges and membership.csv.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    no_self_loops: bool,
}

#[derive(Debug, Args)]
struct DataArgs {
    /// Edge-list path or dataset name.
    #[arg(long)]
    data: String,
    #[arg(long, default_value = "data")]
    data_dir: PathBuf,
    /// Keep edge weights (modularity only; SPDSoS needs binary layers).
    #[arg(long)]
    keep_weights: bool,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value = "spdsos")]
    method: String,
    #[arg(short = 'k', long = "k")]
    k: usize,
    /// Membership CSV; the node map is written beside it.
    #[arg(long, default_value = "pi_hat.csv")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Override the number of repetitions.
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct SelectKArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value = "spsum")]
    method: String,
    /// Inclusive range such as `2..6`.
    #[arg(long, default_value = "2..6")]
    range: String,
    #[arg(long, default_value = "fsum")]
    criterion: String,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Membership CSV with `pi_*` columns.
    #[arg(long)]
    pi: PathBuf,
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(msg) => Failure::Usage(msg),
            other => Failure::Data(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Runs the CLI. `argv[0]` is the program name. Reports go to standard
/// output and errors to standard error.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let mut out = String::new();
    let outcome = match cli.threads {
        Some(0) => Err(Failure::Usage("--threads must be at least 1".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command, &mut out)),
            Err(e) => Err(Failure::Usage(e.to_string())),
        },
        None => dispatch(cli.command, &mut out),
    };
    print!("{out}");
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            EXIT_DATA
        }
    }
}

fn dispatch(cmd: Command, out: &mut String) -> CliResult<()> {
    match cmd {
        Command::Simulate(a) => simulate(a, out),
        Command::Estimate(a) => estimate_cmd(a, out),
        Command::Experiment(a) => experiment(a, out),
        Command::SelectK(a) => select_k(a, out),
        Command::Classify(a) => classify(a, out),
    }
}

fn simulate(a: SimulateArgs, out: &mut String) -> CliResult<()> {
    if a.k == 0 || a.layers == 0 || a.n < a.k {
        return Err(Failure::Usage(format!(
            "need n >= K >= 1 and L >= 1 (n = {}, K = {}, L = {})",
            a.n, a.k, a.layers
        )));
    }
    let pi = generate_membership(a.n, a.k, a.n0, a.seed)?;
    let conn = generate_connectivity(a.k, a.layers, a.seed)?.with_rho(a.rho)?;
    let net = sample_network(&pi, &conn, a.seed, SampleOptions { self_loops: !a.no_self_loops })?;
    std::fs::create_dir_all(&a.out).map_err(|e| Failure::Data(Error::io(&a.out, e)))?;
    let map = NodeMap::identity(a.n);
    let edges = a.out.join("network.edges");
    let membership = a.out.join("membership.csv");
    write_multiplex_edges(&net, &map, &edges)?;
    write_membership_csv(&pi, &map, &membership)?;
    let edge_count: usize = net.layers().iter().map(|l| l.upper_edges().count()).sum();
    let _ = writeln!(
        out,
        "sampled n = {}, L = {}, K = {}, rho = {} ({edge_count} edges)",
        a.n, a.layers, a.k, a.rho
    );
    let _ = writeln!(out, "wrote {}", edges.display());
    let _ = writeln!(out, "wrote {}", membership.display());
    Ok(())
}

const DATASETS: [(&str, &[&str]); 4] = [
    ("lazega", &["Lazega-Law-Firm_multiplex.edges"]),
    ("cs-aarhus", &["CS-Aarhus_multiplex.edges"]),
    ("celegans", &["celegans_connectome_multiplex.edges", "CElegans_multiplex.edges"]),
    ("fao-trade", &["fao_trade_multiplex.edges", "FAO-Trade_multiplex.edges"]),
];

/// Resolves `--data`: an existing path is used as is; a known dataset name is
/// looked up in `data_dir`, also under `<data_dir>/*/Dataset/`.
pub fn resolve_dataset(data: &str, data_dir: &Path) -> Result<PathBuf> {
    let direct = Path::new(data);
    if direct.is_file() {
        return Ok(direct.to_path_buf());
    }
    let key = data.to_ascii_lowercase().replace('_', "-");
    let Some((_, files)) = DATASETS.iter().find(|(name, _)| *name == key) else {
        return Err(Error::UnusableData(format!(
            "'{data}' is neither a file nor a known dataset name"
        )));
    };
    let mut dirs = vec![data_dir.to_path_buf()];
    if let Ok(entries) = std::fs::read_dir(data_dir) {
        let mut subs: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_dir())
            .collect();
        subs.sort();
        for s in subs {
            dirs.push(s.join("Dataset"));
            dirs.push(s);
        }
    }
    for dir in &dirs {
        for f in *files {
            let p = dir.join(f);
            if p.is_file() {
                return Ok(p);
            }
        }
    }
    Err(Error::UnusableData(format!(
        "dataset '{data}' not found in {} (expected {})",
        data_dir.display(),
        files.join(" or ")
    )))
}

fn load(data: &DataArgs) -> CliResult<(crate::model::MultiLayerNetwork, NodeMap)> {
    let path = resolve_dataset(&data.data, &data.data_dir).map_err(Failure::Data)?;
    let opts = ReadOptions {
        binarize: !data.keep_weights,
        drop_self_loops: true,
    };
    Ok(read_multiplex_edges(&path, opts).map_err(Failure::Data)?)
}

fn parse_method(s: &str, keep_weights: bool) -> CliResult<Method> {
    let m: Method = s.parse()?;
    if keep_weights && m == Method::SpDSoS {
        return Err(Failure::Usage(
            "SPDSoS needs binary layers; drop --keep-weights or pick another method".into(),
        ));
    }
    Ok(m)
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn estimate_cmd(a: EstimateArgs, out: &mut String) -> CliResult<()> {
    let method = parse_method(&a.method, a.data.keep_weights)?;
    let (net, map) = load(&a.data)?;
    let fit = estimate(&net, method, a.k).map_err(Failure::Data)?;
    write_membership_csv(&fit.pi_hat, &map, &a.out)?;
    let map_path = sibling(&a.out, ".nodes.csv");
    io::write_atomic(&map_path, map.to_csv().as_bytes())?;
    let _ = writeln!(out, "{method} with K = {} on n = {}, L = {}", a.k, net.n(), net.num_layers());
    if let Some(d) = fit.diagnostics.degeneracy {
        let _ = writeln!(
            out,
            "warning: eigenvalue {} is tied with the next one ({}); the embedding is not unique",
            d.kth, d.next
        );
    }
    if !fit.diagnostics.zero_rows.is_empty() {
        let _ = writeln!(
            out,
            "warning: {} nodes had no positive membership and were set uniform",
            fit.diagnostics.zero_rows.len()
        );
    }
    classification_report(&classify_nodes(&fit.pi_hat), &fit.pi_hat, out);
    let _ = writeln!(out, "wrote {}", a.out.display());
    let _ = writeln!(out, "wrote {}", map_path.display());
    Ok(())
}

fn classification_report(c: &NodeClassification, pi: &MembershipMatrix, out: &mut String) {
    let n = pi.n();
    let _ = writeln!(out, "community  mass      home nodes");
    for k in 0..pi.k() {
        let mass = pi.matrix().column(k).sum();
        let home = c.home_community.iter().filter(|&&h| h == k).count();
        let _ = writeln!(out, "{:<10} {:<9.4} {home}", k + 1, mass);
    }
    for label in [NodeLabel::HighlyMixed, NodeLabel::Neutral, NodeLabel::HighlyPure] {
        let _ = writeln!(out, "{:<13} {} / {n}", label.as_str(), c.count(label));
    }
    let _ = writeln!(out, "sigma_mixed = {:.4}", c.sigma_mixed);
    let _ = writeln!(out, "sigma_pure  = {:.4}", c.sigma_pure);
    let _ = writeln!(out, "upsilon     = {:.4}", c.upsilon);
}

fn classify(a: ClassifyArgs, out: &mut String) -> CliResult<()> {
    let (_, pi) = read_membership_csv(&a.pi).map_err(Failure::Data)?;
    classification_report(&classify_nodes(&pi), &pi, out);
    Ok(())
}

/// Parses `a..b` or `a..=b`, both inclusive.
pub fn parse_k_range(s: &str) -> Result<RangeInclusive<usize>> {
    let bad = || Error::Config(format!("K range '{s}' is not of the form a..b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn select_k(a: SelectKArgs, out: &mut String) -> CliResult<()> {
    let method = parse_method(&a.method, a.data.keep_weights)?;
    let criterion: Criterion = a.criterion.parse()?;
    let range = parse_k_range(&a.range)?;
    let (net, _) = load(&a.data)?;
    let sel = estimate_k(&net, method, range, criterion)?;
    let _ = writeln!(out, "K  {}", criterion.name());
    for c in &sel.candidates {
        match &c.outcome {
            Ok(score) => {
                let _ = writeln!(out, "{:<2} {score:.4}", c.k);
            }
            Err(e) => {
                let _ = writeln!(out, "{:<2} failed: {e}", c.k);
            }
        }
    }
    let _ = writeln!(out, "({}, {:.4})", sel.best_k, sel.best_score);
    Ok(())
}

fn experiment(a: ExperimentArgs, out: &mut String) -> CliResult<()> {
    let seed = a.seed.unwrap_or(0);
    let (mut cfg, name) = match (&a.preset, &a.config) {
        (Some(p), _) => {
            let preset: Preset = p.parse()?;
            (preset.config(seed), preset.name().to_string())
        }
        (None, Some(path)) => {
            let cfg = io::read_config(path).map_err(Failure::Data)?;
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "experiment".into());
            (cfg, name)
        }
        (None, None) => return Err(Failure::Usage("give --preset or --config".into())),
    };
    if let Some(s) = a.seed {
        cfg.base_seed = s;
    }
    if let Some(r) = a.reps {
        cfg.repetitions = r;
    }
    cfg.validate()?;
    let result = run_experiment(&cfg)?;
    std::fs::create_dir_all(&a.out_dir).map_err(|e| Failure::Data(Error::io(&a.out_dir, e)))?;
    let results = a.out_dir.join(format!("{name}_results.csv"));
    let raw = a.out_dir.join(format!("{name}_raw.csv"));
    write_results_csv(&result, &results)?;
    write_raw_csv(&result, &raw)?;
    let mut written = vec![results, raw];
    for metric in ["hamming", "relative"] {
        let path = a.out_dir.join(format!("{name}_{metric}.svg"));
        render_line_chart(&chart_series(&result, metric), &chart_options(&result, &name, metric), &path)?;
        written.push(path);
    }
    summary_table(&result, out);
    for p in written {
        let _ = writeln!(out, "wrote {}", p.display());
    }
    Ok(())
}

fn chart_series(result: &ExperimentResult, metric: &str) -> Vec<Series> {
    result
        .config
        .methods
        .iter()
        .map(|&m| {
            let points = result
                .series(m)
                .iter()
                .map(|c| {
                    let y = if metric == "hamming" { c.hamming_mean() } else { c.relative_mean() };
                    (c.sweep_value, y)
                })
                .collect();
            Series::new(m.name(), points)
        })
        .collect()
}

fn chart_options(result: &ExperimentResult, name: &str, metric: &str) -> ChartOptions {
    ChartOptions {
        title: name.to_string(),
        x_label: result.config.sweep.name().to_string(),
        y_label: format!("mean {metric} error"),
        ..ChartOptions::default()
    }
}

fn summary_table(result: &ExperimentResult, out: &mut String) {
    let _ = writeln!(
        out,
        "{:<8} {:>10} {:>12} {:>10} {:>12} {:>10}",
        "method",
        result.config.sweep.name(),
        "hamming",
        "se",
        "relative",
        "se"
    );
    for c in &result.cells {
        let _ = writeln!(
            out,
            "{:<8} {:>10} {:>12.4} {:>10.4} {:>12.4} {:>10.4}",
            c.method.name(),
            c.sweep_value,
            c.hamming_mean(),
            c.hamming_se(),
            c.relative_mean(),
            c.relative_se()
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_range_forms() {
        assert_eq!(parse_k_range("2..6").unwrap(), 2..=6);
        assert_eq!(parse_k_range("2..=6").unwrap(), 2..=6);
        assert!(parse_k_range("6..2").is_err());
        assert!(parse_k_range("x").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(cli_main(["mlmmsb", "frobnicate"]), EXIT_USAGE);
        assert_eq!(cli_main(["mlmmsb", "classify"]), EXIT_USAGE);
        assert_eq!(cli_main(["mlmmsb", "select-k", "--data", "x", "--method", "nope"]), EXIT_USAGE);
    }
}
