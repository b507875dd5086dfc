//! Monte Carlo harness for the simulation studies, plus the sparsity
//! diagnostics and rate-slope fits used to check the error theory.
//!
//! Every repetition draws a fresh membership matrix, a fresh connectivity
//! stack and a fresh network from a seed derived from
//! `(base_seed, sweep index, repetition)`. All methods see the same network,
//! so comparisons between methods are paired.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::aggregate::{self, AggregateKind};
use crate::error::{Error, Result};
use crate::estimators::{estimate, Method};
use crate::metrics::error_report;
use crate::model::{
    generate_connectivity, generate_membership, sample_network, ExpectationStack,
    MultiLayerNetwork, SampleOptions,
};
use crate::seed::derive_seed;

/// Number of communities in every preset.
pub const PRESET_K: usize = 3;

/// The parameter varied across a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    Rho,
    Layers,
    Nodes,
    PurePerCommunity,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Rho => "rho",
            SweepParam::Layers => "L",
            SweepParam::Nodes => "n",
            SweepParam::PurePerCommunity => "n0",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rho" => Ok(SweepParam::Rho),
            "L" | "l" | "layers" => Ok(SweepParam::Layers),
            "n" | "nodes" => Ok(SweepParam::Nodes),
            "n0" | "pure" => Ok(SweepParam::PurePerCommunity),
            other => Err(Error::Config(format!("unknown sweep parameter '{other}'"))),
        }
    }
}

/// Named parameter grids. The `*Scaled` variants are desk-sized versions of
/// the full studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Exp1Rho,
    Exp2Layers,
    Exp3Nodes,
    Exp4Pure,
    Exp1Scaled,
    Exp2Scaled,
    Exp3Scaled,
    Exp4Scaled,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::Exp1Rho,
        Preset::Exp2Layers,
        Preset::Exp3Nodes,
        Preset::Exp4Pure,
        Preset::Exp1Scaled,
        Preset::Exp2Scaled,
        Preset::Exp3Scaled,
        Preset::Exp4Scaled,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Exp1Rho => "exp1",
            Preset::Exp2Layers => "exp2",
            Preset::Exp3Nodes => "exp3",
            Preset::Exp4Pure => "exp4",
            Preset::Exp1Scaled => "exp1-scaled",
            Preset::Exp2Scaled => "exp2-scaled",
            Preset::Exp3Scaled => "exp3-scaled",
            Preset::Exp4Scaled => "exp4-scaled",
        }
    }

    pub fn config(self, base_seed: u64) -> ExperimentConfig {
        let grid = |start: f64, step: f64, count: usize| -> Vec<f64> {
            (1..=count).map(|i| start + step * (i - 1) as f64).collect()
        };
        let base = ExperimentConfig {
            preset: Some(self),
            n: 500,
            layers: 100,
            rho: 0.1,
            n0: 100,
            k: PRESET_K,
            pure_fraction: None,
            sweep: SweepParam::Rho,
            values: Vec::new(),
            repetitions: 100,
            base_seed,
            methods: Method::ALL.to_vec(),
            self_loops: true,
        };
        match self {
            Preset::Exp1Rho => ExperimentConfig {
                values: (1..=10).map(|i| i as f64 * 0.02).collect(),
                ..base
            },
            Preset::Exp2Layers => ExperimentConfig {
                sweep: SweepParam::Layers,
                values: grid(10.0, 10.0, 10),
                ..base
            },
            Preset::Exp3Nodes => ExperimentConfig {
                layers: 40,
                sweep: SweepParam::Nodes,
                values: grid(200.0, 200.0, 10),
                pure_fraction: Some(0.25),
                ..base
            },
            Preset::Exp4Pure => ExperimentConfig {
                n: 600,
                layers: 50,
                sweep: SweepParam::PurePerCommunity,
                values: grid(20.0, 20.0, 10),
                ..base
            },
            Preset::Exp1Scaled => ExperimentConfig {
                n: 200,
                layers: 30,
                n0: 50,
                values: vec![0.02, 0.06, 0.10, 0.14, 0.18],
                repetitions: 20,
                ..base
            },
            Preset::Exp2Scaled => ExperimentConfig {
                n: 300,
                rho: 0.2,
                n0: 75,
                sweep: SweepParam::Layers,
                values: vec![8.0, 16.0, 32.0, 64.0],
                repetitions: 20,
                ..base
            },
            Preset::Exp3Scaled => ExperimentConfig {
                layers: 20,
                sweep: SweepParam::Nodes,
                values: grid(100.0, 100.0, 4),
                pure_fraction: Some(0.25),
                repetitions: 10,
                ..base
            },
            Preset::Exp4Scaled => ExperimentConfig {
                n: 300,
                layers: 20,
                sweep: SweepParam::PurePerCommunity,
                values: grid(10.0, 20.0, 5),
                repetitions: 10,
                ..base
            },
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown preset '{s}'")))
    }
}

/// A full experiment description. Fixed parameters apply at every sweep point
/// except the swept one.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub preset: Option<Preset>,
    pub n: usize,
    pub layers: usize,
    pub rho: f64,
    pub n0: usize,
    pub k: usize,
    /// When set, `n0 = floor(n * pure_fraction)` at each point.
    pub pure_fraction: Option<f64>,
    pub sweep: SweepParam,
    pub values: Vec<f64>,
    pub repetitions: usize,
    pub base_seed: u64,
    pub methods: Vec<Method>,
    pub self_loops: bool,
}

/// Concrete model parameters at one sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointParams {
    pub n: usize,
    pub layers: usize,
    pub rho: f64,
    pub n0: usize,
}

fn as_count(v: f64, what: &str) -> Result<usize> {
    if v >= 0.0 && v.fract() == 0.0 && v <= usize::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(Error::Config(format!("{what} must be a nonnegative integer, got {v}")))
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("no methods selected".into()));
        }
        if self.values.is_empty() {
            return Err(Error::Config("sweep values must be nonempty".into()));
        }
        if self.values.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Config("sweep values must be strictly increasing".into()));
        }
        for &v in &self.values {
            let p = self.point(v)?;
            if !(p.rho >= 0.0 && p.rho <= 1.0) {
                return Err(Error::Config(format!("rho = {} outside [0, 1]", p.rho)));
            }
            if p.layers == 0 || self.k == 0 || p.n < self.k {
                return Err(Error::Config(format!(
                    "need L >= 1 and n >= K >= 1 (n = {}, L = {}, K = {})",
                    p.n, p.layers, self.k
                )));
            }
            if self.k * p.n0 > p.n {
                return Err(Error::Config(format!(
                    "K * n0 = {} exceeds n = {}",
                    self.k * p.n0,
                    p.n
                )));
            }
        }
        Ok(())
    }

    pub fn point(&self, value: f64) -> Result<PointParams> {
        let mut p = PointParams {
            n: self.n,
            layers: self.layers,
            rho: self.rho,
            n0: self.n0,
        };
        match self.sweep {
            SweepParam::Rho => p.rho = value,
            SweepParam::Layers => p.layers = as_count(value, "L")?,
            SweepParam::Nodes => p.n = as_count(value, "n")?,
            SweepParam::PurePerCommunity => p.n0 = as_count(value, "n0")?,
        }
        if let Some(f) = self.pure_fraction {
            p.n0 = (p.n as f64 * f).floor() as usize;
        }
        Ok(p)
    }

    /// Seed of repetition `rep` at sweep point `sweep_index`.
    pub fn seed_for(&self, sweep_index: usize, rep: usize) -> u64 {
        derive_seed(self.base_seed, &[sweep_index as u64, rep as u64])
    }
}

/// Errors of one method at one sweep point, across repetitions.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub method: Method,
    pub sweep_index: usize,
    pub sweep_value: f64,
    pub seeds: Vec<u64>,
    pub hamming: Vec<f64>,
    pub relative: Vec<f64>,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn standard_error(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let m = mean(v);
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64;
    (var / v.len() as f64).sqrt()
}

impl Cell {
    pub fn repetitions(&self) -> usize {
        self.hamming.len()
    }

    pub fn hamming_mean(&self) -> f64 {
        mean(&self.hamming)
    }

    pub fn hamming_se(&self) -> f64 {
        standard_error(&self.hamming)
    }

    pub fn relative_mean(&self) -> f64 {
        mean(&self.relative)
    }

    pub fn relative_se(&self) -> f64 {
        standard_error(&self.relative)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    /// Ordered by method (in config order), then sweep index.
    pub cells: Vec<Cell>,
}

impl ExperimentResult {
    pub fn cell(&self, method: Method, sweep_index: usize) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.method == method && c.sweep_index == sweep_index)
    }

    /// Cells of one method, in sweep order.
    pub fn series(&self, method: Method) -> Vec<&Cell> {
        self.cells.iter().filter(|c| c.method == method).collect()
    }
}

/// Runs one repetition: draws a model and a network, fits every method.
/// Returns `(hamming, relative)` per method in config order.
pub fn run_repetition(cfg: &ExperimentConfig, sweep_index: usize, rep: usize) -> Result<Vec<(f64, f64)>> {
    let p = cfg.point(cfg.values[sweep_index])?;
    let seed = cfg.seed_for(sweep_index, rep);
    let pi = generate_membership(p.n, cfg.k, p.n0, seed)?;
    let conn = generate_connectivity(cfg.k, p.layers, seed)?.with_rho(p.rho)?;
    let net = sample_network(&pi, &conn, seed, SampleOptions { self_loops: cfg.self_loops })?;
    cfg.methods
        .iter()
        .map(|&m| {
            let fit = estimate(&net, m, cfg.k).map_err(|e| {
                Error::UnusableData(format!(
                    "{m} failed at {} = {}, repetition {rep}: {e}",
                    cfg.sweep,
                    cfg.values[sweep_index]
                ))
            })?;
            let r = error_report(&fit.pi_hat, &pi)?;
            Ok((r.hamming, r.relative))
        })
        .collect()
}

/// Runs every (sweep point, repetition) pair in parallel. Results are keyed by
/// index, so they do not depend on scheduling or thread count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let reps = cfg.repetitions;
    let tasks: Vec<(usize, usize)> = (0..cfg.values.len())
        .flat_map(|s| (0..reps).map(move |r| (s, r)))
        .collect();
    let outcomes = tasks
        .par_iter()
        .map(|&(s, r)| run_repetition(cfg, s, r))
        .collect::<Result<Vec<_>>>()?;

    let mut cells = Vec::with_capacity(cfg.methods.len() * cfg.values.len());
    for (mi, &method) in cfg.methods.iter().enumerate() {
        for (s, &value) in cfg.values.iter().enumerate() {
            let rows = &outcomes[s * reps..(s + 1) * reps];
            cells.push(Cell {
                method,
                sweep_index: s,
                sweep_value: value,
                seeds: (0..reps).map(|r| cfg.seed_for(s, r)).collect(),
                hamming: rows.iter().map(|o| o[mi].0).collect(),
                relative: rows.iter().map(|o| o[mi].1).collect(),
            });
        }
    }
    Ok(ExperimentResult {
        config: cfg.clone(),
        cells,
    })
}

/// Sparsity statistics of a simulated network against its expectation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssumptionDiagnostics {
    /// `max_{i,j} |sum_l (A_l - Omega_l)(i, j)|`.
    pub tau: f64,
    /// `max_{i,j} |sum_l sum_m (A_l(i,m) A_l(m,j) - Omega_l(i,m) Omega_l(m,j))|`,
    /// diagonal included.
    pub tau_tilde: f64,
    /// `rho n L >= tau^2 log(n + L)`.
    pub sum_condition_holds: bool,
    /// `rho^2 n^2 L >= tau_tilde^2 log(n + L)`.
    pub squared_condition_holds: bool,
}

pub fn compute_diagnostics(net: &MultiLayerNetwork, omega: &ExpectationStack) -> Result<AssumptionDiagnostics> {
    if net.n() != omega.n() || net.num_layers() != omega.num_layers() {
        return Err(Error::Dimension(format!(
            "network is n = {}, L = {}; expectation is n = {}, L = {}",
            net.n(),
            net.num_layers(),
            omega.n(),
            omega.num_layers()
        )));
    }
    let n = net.n() as f64;
    let l = net.num_layers() as f64;
    let rho = omega.rho();

    let a_sum = aggregate::build_with(net, AggregateKind::Sum, aggregate::Representation::Dense)?;
    let tau = (a_sum.dense().expect("dense") - omega.sum()).amax();

    let sos = aggregate::build_with(net, AggregateKind::Sos, aggregate::Representation::Dense)?;
    let tau_tilde = (sos.dense().expect("dense") - omega.sum_of_squares()).amax();

    let log_term = (n + l).ln();
    Ok(AssumptionDiagnostics {
        tau,
        tau_tilde,
        sum_condition_holds: rho * n * l >= tau * tau * log_term,
        squared_condition_holds: rho * rho * n * n * l >= tau_tilde * tau_tilde * log_term,
    })
}

/// Ordinary least-squares slope of `ln(mean Hamming error)` against
/// `ln(sweep value)` for one method.
pub fn rate_slope_check(result: &ExperimentResult, axis: SweepParam, method: Method) -> Result<f64> {
    if result.config.sweep != axis {
        return Err(Error::Config(format!(
            "result sweeps {}, not {axis}",
            result.config.sweep
        )));
    }
    let series = result.series(method);
    if series.is_empty() {
        return Err(Error::Config(format!("result has no {method} cells")));
    }
    let points: Vec<(f64, f64)> = series
        .iter()
        .map(|c| (c.sweep_value, c.hamming_mean()))
        .collect();
    log_log_slope(&points)
}

/// OLS slope of `ln y` on `ln x`. Needs at least four points, all positive.
pub fn log_log_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 4 {
        return Err(Error::UnusableData(format!(
            "need at least 4 points for a slope, got {}",
            points.len()
        )));
    }
    if let Some(&(x, y)) = points.iter().find(|&&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::UnusableData(format!(
            "log-log fit needs positive values, got ({x}, {y})"
        )));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::UnusableData("sweep values are all equal".into()));
    }
    Ok(sxy / sxx)
}
