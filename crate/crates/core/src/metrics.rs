//! Evaluation metrics: permutation-matched errors against ground truth,
//! fuzzy modularities, node purity indices and community-count selection.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use itertools::Itertools;
use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::{estimate, Method};
use crate::model::{Layer, MembershipMatrix, MultiLayerNetwork};

/// Exhaustive permutation search is used up to this many communities.
pub const MAX_PERMUTATION_K: usize = 8;

/// Upper bound on `max_k Pi(i, k)` for a highly mixed node (inclusive).
pub const MIXED_THRESHOLD: f64 = 0.6;
/// Lower bound on `max_k Pi(i, k)` for a highly pure node (inclusive).
pub const PURE_THRESHOLD: f64 = 0.9;

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    /// `min_P ||Pi_hat - Pi P||_1 / n` with the entrywise 1-norm.
    pub hamming: f64,
    /// `min_P ||Pi_hat - Pi P||_F / ||Pi||_F`.
    pub relative: f64,
    /// Column `c` of `Pi_hat` is matched with column `best_permutation[c]` of
    /// `Pi` under the Hamming criterion.
    pub best_permutation: Vec<usize>,
}

fn check_pair(pi_hat: &MembershipMatrix, pi: &MembershipMatrix) -> Result<()> {
    if pi_hat.n() != pi.n() || pi_hat.k() != pi.k() {
        return Err(Error::Dimension(format!(
            "estimate is {}x{}, truth is {}x{}",
            pi_hat.n(),
            pi_hat.k(),
            pi.n(),
            pi.k()
        )));
    }
    if pi.k() > MAX_PERMUTATION_K {
        return Err(Error::UnsupportedK {
            k: pi.k(),
            max: MAX_PERMUTATION_K,
        });
    }
    Ok(())
}

// Both norms split over columns, so the search runs over K x K cost tables.
fn cost_tables(pi_hat: &DMatrix<f64>, pi: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let k = pi.ncols();
    let mut l1 = DMatrix::zeros(k, k);
    let mut sq = DMatrix::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            let (mut s1, mut s2) = (0.0, 0.0);
            for i in 0..pi.nrows() {
                let d = pi_hat[(i, a)] - pi[(i, b)];
                s1 += d.abs();
                s2 += d * d;
            }
            l1[(a, b)] = s1;
            sq[(a, b)] = s2;
        }
    }
    (l1, sq)
}

fn best_assignment(cost: &DMatrix<f64>) -> (f64, Vec<usize>) {
    let k = cost.nrows();
    let mut best = (f64::INFINITY, (0..k).collect::<Vec<_>>());
    for perm in (0..k).permutations(k) {
        let total: f64 = perm.iter().enumerate().map(|(a, &b)| cost[(a, b)]).sum();
        if total < best.0 {
            best = (total, perm);
        }
    }
    best
}

/// Both errors, each minimized over all `K!` column permutations.
pub fn error_report(pi_hat: &MembershipMatrix, pi: &MembershipMatrix) -> Result<ErrorReport> {
    check_pair(pi_hat, pi)?;
    let (l1, sq) = cost_tables(pi_hat.matrix(), pi.matrix());
    let (h, perm) = best_assignment(&l1);
    let (f, _) = best_assignment(&sq);
    Ok(ErrorReport {
        hamming: h / pi.n() as f64,
        relative: f.max(0.0).sqrt() / pi.matrix().norm(),
        best_permutation: perm,
    })
}

pub fn hamming_error(pi_hat: &MembershipMatrix, pi: &MembershipMatrix) -> Result<f64> {
    error_report(pi_hat, pi).map(|r| r.hamming)
}

pub fn relative_error(pi_hat: &MembershipMatrix, pi: &MembershipMatrix) -> Result<f64> {
    error_report(pi_hat, pi).map(|r| r.relative)
}

/// Fuzzy modularity of one weighted symmetric adjacency given by its layers
/// (summed), or `None` when it has no edges.
///
/// Every row of the modularity matrix `A - d d^T / m` sums to zero, so the
/// memberships can be shifted by any fixed vector without changing the score.
/// Shifting by row 0 makes a constant membership score exactly zero.
fn fuzzy_modularity(n: usize, layers: &[&Layer], pi: &DMatrix<f64>) -> Option<f64> {
    let k = pi.ncols();
    let mut degrees = vec![0.0; n];
    for layer in layers {
        for (i, d) in degrees.iter_mut().enumerate() {
            *d += layer.degree(i);
        }
    }
    let m: f64 = degrees.iter().sum();
    if m <= 0.0 {
        return None;
    }
    let reference: Vec<f64> = (0..k).map(|c| pi[(0, c)]).collect();
    let shifted = DMatrix::from_fn(n, k, |i, c| pi[(i, c)] - reference[c]);

    let mut within = 0.0;
    for layer in layers {
        for i in 0..n {
            let (cols, vals) = layer.neighbors(i);
            for (&j, &w) in cols.iter().zip(vals) {
                within += w * shifted.row(i).dot(&shifted.row(j));
            }
        }
    }
    let mut pulled = vec![0.0; k];
    for (i, &d) in degrees.iter().enumerate() {
        for (c, p) in pulled.iter_mut().enumerate() {
            *p += d * shifted[(i, c)];
        }
    }
    let null: f64 = pulled.iter().map(|v| v * v).sum::<f64>() / m;
    Some((within - null) / m)
}

fn check_network_pair(net: &MultiLayerNetwork, pi_hat: &MembershipMatrix) -> Result<()> {
    if net.n() != pi_hat.n() {
        return Err(Error::Dimension(format!(
            "network has {} nodes, memberships have {}",
            net.n(),
            pi_hat.n()
        )));
    }
    Ok(())
}

/// Fuzzy modularity of the summed adjacency `A_sum`.
pub fn q_fsum(net: &MultiLayerNetwork, pi_hat: &MembershipMatrix) -> Result<f64> {
    check_network_pair(net, pi_hat)?;
    let layers: Vec<&Layer> = net.layers().iter().collect();
    fuzzy_modularity(net.n(), &layers, pi_hat.matrix()).ok_or(Error::EmptyNetwork)
}

/// Mean of the per-layer fuzzy modularities. Layers without edges are skipped.
pub fn q_fmean(net: &MultiLayerNetwork, pi_hat: &MembershipMatrix) -> Result<f64> {
    check_network_pair(net, pi_hat)?;
    let scores: Vec<f64> = net
        .layers()
        .iter()
        .enumerate()
        .filter_map(|(l, layer)| {
            let q = fuzzy_modularity(net.n(), &[layer], pi_hat.matrix());
            if q.is_none() {
                log::warn!("layer {} has no edges; skipped in fuzzy mean modularity", l + 1);
            }
            q
        })
        .collect();
    if scores.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    Ok(scores.iter().sum::<f64>() / scores.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeLabel {
    HighlyMixed,
    Neutral,
    HighlyPure,
}

impl NodeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeLabel::HighlyMixed => "highly_mixed",
            NodeLabel::Neutral => "neutral",
            NodeLabel::HighlyPure => "highly_pure",
        }
    }
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeClassification {
    /// `argmax_k Pi(i, k)`, lowest index on ties.
    pub home_community: Vec<usize>,
    pub labels: Vec<NodeLabel>,
    /// Fraction of highly mixed nodes.
    pub sigma_mixed: f64,
    /// Fraction of highly pure nodes.
    pub sigma_pure: f64,
    /// Smallest over largest column sum.
    pub upsilon: f64,
}

impl NodeClassification {
    pub fn count(&self, label: NodeLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }
}

pub fn classify_nodes(pi_hat: &MembershipMatrix) -> NodeClassification {
    let (n, k) = (pi_hat.n(), pi_hat.k());
    let p = pi_hat.matrix();
    let mut home_community = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let mut best = 0;
        for c in 1..k {
            if p[(i, c)] > p[(i, best)] {
                best = c;
            }
        }
        let top = p[(i, best)];
        home_community.push(best);
        labels.push(if top <= MIXED_THRESHOLD {
            NodeLabel::HighlyMixed
        } else if top >= PURE_THRESHOLD {
            NodeLabel::HighlyPure
        } else {
            NodeLabel::Neutral
        });
    }
    let frac = |l: NodeLabel| labels.iter().filter(|&&x| x == l).count() as f64 / n as f64;
    let col_sums: Vec<f64> = (0..k).map(|c| p.column(c).sum()).collect();
    let max = col_sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = col_sums.iter().copied().fold(f64::INFINITY, f64::min);
    NodeClassification {
        sigma_mixed: frac(NodeLabel::HighlyMixed),
        sigma_pure: frac(NodeLabel::HighlyPure),
        upsilon: if max > 0.0 { min / max } else { 0.0 },
        home_community,
        labels,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    FuzzySum,
    FuzzyMean,
}

impl Criterion {
    pub fn name(self) -> &'static str {
        match self {
            Criterion::FuzzySum => "fsum",
            Criterion::FuzzyMean => "fmean",
        }
    }

    pub fn score(self, net: &MultiLayerNetwork, pi_hat: &MembershipMatrix) -> Result<f64> {
        match self {
            Criterion::FuzzySum => q_fsum(net, pi_hat),
            Criterion::FuzzyMean => q_fmean(net, pi_hat),
        }
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fsum" | "q_fsum" => Ok(Criterion::FuzzySum),
            "fmean" | "q_fmean" => Ok(Criterion::FuzzyMean),
            other => Err(Error::Config(format!(
                "unknown criterion '{other}' (expected fsum or fmean)"
            ))),
        }
    }
}

/// One candidate `K` tried during selection.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub k: usize,
    /// The modularity score, or why the estimator failed at this `K`.
    pub outcome: std::result::Result<f64, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KSelection {
    pub best_k: usize,
    pub best_score: f64,
    pub candidates: Vec<Candidate>,
}

/// Picks the `K` in `k_range` whose estimate maximizes `criterion`. Smaller
/// `K` wins ties; a `K` where the estimator fails is skipped.
pub fn estimate_k(
    net: &MultiLayerNetwork,
    method: Method,
    k_range: RangeInclusive<usize>,
    criterion: Criterion,
) -> Result<KSelection> {
    let upper = net.n().min(MAX_PERMUTATION_K);
    if k_range.is_empty() || *k_range.start() < 1 || *k_range.end() > upper {
        return Err(Error::Config(format!(
            "K range {}..={} must lie within 1..={upper}",
            k_range.start(),
            k_range.end()
        )));
    }
    let candidates: Vec<Candidate> = k_range
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|k| {
            let outcome = estimate(net, method, k)
                .and_then(|r| criterion.score(net, &r.pi_hat))
                .map_err(|e| e.to_string());
            Candidate { k, outcome }
        })
        .collect();
    let mut best: Option<(usize, f64)> = None;
    for c in &candidates {
        match &c.outcome {
            Ok(score) => {
                if best.is_none_or(|(_, s)| *score > s) {
                    best = Some((c.k, *score));
                }
            }
            Err(e) => log::warn!("{method} failed at K = {}: {e}", c.k),
        }
    }
    let (best_k, best_score) = best.ok_or_else(|| {
        Error::ModelSelection(format!("{method} failed for every candidate K"))
    })?;
    Ok(KSelection {
        best_k,
        best_score,
        candidates,
    })
}
