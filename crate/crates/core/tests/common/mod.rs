#![allow(dead_code)]

use mlmmsb::model::{ConnectivityStack, MembershipMatrix};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Plain nested-`Vec` matrix, kept apart from nalgebra so the oracles below
/// share no code with the library.
pub type Grid = Vec<Vec<f64>>;

pub fn grid(m: &DMatrix<f64>) -> Grid {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

pub fn matmul(a: &Grid, b: &Grid) -> Grid {
    let (n, m, p) = (a.len(), b.len(), b[0].len());
    let mut c = vec![vec![0.0; p]; n];
    for i in 0..n {
        for k in 0..m {
            for j in 0..p {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

pub fn transpose(a: &Grid) -> Grid {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

/// Cyclic Jacobi rotations; returns all eigenvalues and eigenvectors as
/// columns of the second value.
pub fn jacobi_eigen(m: &Grid) -> (Vec<f64>, Grid) {
    let n = m.len();
    let mut a = m.clone();
    let mut v: Grid = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

/// Every permutation of `0..k`, by recursion.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// `min_P sum |pi_hat - pi P| / n` by trying every permutation on the full
/// matrices.
pub fn brute_hamming(pi_hat: &Grid, pi: &Grid) -> f64 {
    let (n, k) = (pi.len(), pi[0].len());
    permutations(k)
        .into_iter()
        .map(|p| {
            let mut s = 0.0;
            for i in 0..n {
                for c in 0..k {
                    s += (pi_hat[i][c] - pi[i][p[c]]).abs();
                }
            }
            s / n as f64
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn brute_relative(pi_hat: &Grid, pi: &Grid) -> f64 {
    let (n, k) = (pi.len(), pi[0].len());
    let norm: f64 = pi.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    permutations(k)
        .into_iter()
        .map(|p| {
            let mut s = 0.0;
            for i in 0..n {
                for c in 0..k {
                    let d = pi_hat[i][c] - pi[i][p[c]];
                    s += d * d;
                }
            }
            s.sqrt() / norm
        })
        .fold(f64::INFINITY, f64::min)
}

/// Newman-Girvan modularity of a hard partition of one weighted graph:
/// `sum_c (e_c - a_c^2)` with `e_c` the fraction of edge weight inside `c`
/// and `a_c` the fraction of degree in `c`.
pub fn newman_girvan(adj: &Grid, labels: &[usize]) -> f64 {
    let n = adj.len();
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let two_m: f64 = adj.iter().flatten().sum();
    let mut e = vec![0.0; k];
    let mut a = vec![0.0; k];
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                e[labels[i]] += adj[i][j];
            }
            a[labels[i]] += adj[i][j];
        }
    }
    (0..k).map(|c| e[c] / two_m - (a[c] / two_m).powi(2)).sum()
}

/// A random row-stochastic matrix whose first `k` rows are the basis rows.
pub fn random_membership_with_pure(n: usize, k: usize, seed: u64) -> MembershipMatrix {
    let mut r = rng(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            if i < k {
                (0..k).map(|c| if c == i { 1.0 } else { 0.0 }).collect()
            } else {
                let w: Vec<f64> = (0..k).map(|_| r.random::<f64>() + 0.05).collect();
                let s: f64 = w.iter().sum();
                w.iter().map(|x| x / s).collect()
            }
        })
        .collect();
    MembershipMatrix::from_rows_lenient(&rows, 1e-9).unwrap()
}

pub fn random_connectivity(k: usize, l: usize, rho: f64, seed: u64) -> ConnectivityStack {
    let mut r = rng(seed);
    let mats = (0..l)
        .map(|_| {
            let mut b = DMatrix::zeros(k, k);
            for i in 0..k {
                for j in i..k {
                    let v: f64 = r.random();
                    b[(i, j)] = v;
                    b[(j, i)] = v;
                }
            }
            b
        })
        .collect();
    ConnectivityStack::new(mats, rho).unwrap()
}

/// Random symmetric binary layers with density `p`, loops optional.
pub fn random_binary_layers(n: usize, l: usize, p: f64, loops: bool, seed: u64) -> Vec<DMatrix<f64>> {
    let mut r = rng(seed);
    (0..l)
        .map(|_| {
            let mut a = DMatrix::zeros(n, n);
            for i in 0..n {
                let start = if loops { i } else { i + 1 };
                for j in start..n {
                    if r.random::<f64>() < p {
                        a[(i, j)] = 1.0;
                        a[(j, i)] = 1.0;
                    }
                }
            }
            a
        })
        .collect()
}

/// Spearman rank correlation without ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let rank = |v: &[f64]| -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        for (pos, &i) in idx.iter().enumerate() {
            r[i] = pos as f64;
        }
        r
    };
    let (rx, ry) = (rank(x), rank(y));
    let n = x.len() as f64;
    let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b) * (a - b)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}
