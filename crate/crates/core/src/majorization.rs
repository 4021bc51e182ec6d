//! Weak supermajorization `x ≺^w y`, majorization `x ≺ y`, and a
//! doubly stochastic witness `E` with `x = E y`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RealMatrix;

/// Default slack tolerance: `1e-9 · max(1, ‖y‖₁)`.
pub fn default_tolerance(y: &[f64]) -> f64 {
    let l1: f64 = y.iter().map(|v| v.abs()).sum();
    1e-9 * l1.max(1.0)
}

fn ascending(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorizationReport {
    /// Entry `k-1` is `Σ_{i≤k} x↑_i − Σ_{i≤k} y↑_i`.
    pub k_slacks: Vec<f64>,
    pub weakly_supermajorized: bool,
    pub majorized: bool,
    pub tol: f64,
}

impl MajorizationReport {
    pub fn min_slack(&self) -> f64 {
        self.k_slacks.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Slack of the full sums, `Σ x − Σ y`.
    pub fn total_slack(&self) -> f64 {
        *self.k_slacks.last().expect("reports are never empty")
    }

    /// First `k` (1-based) whose slack is below `-tol`.
    pub fn first_violation(&self) -> Option<usize> {
        self.k_slacks
            .iter()
            .position(|s| *s < -self.tol)
            .map(|i| i + 1)
    }
}

pub fn check_weak_supermajorization(x: &[f64], y: &[f64], tol: f64) -> Result<MajorizationReport> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.is_empty() {
        return Err(Error::Empty);
    }
    let xs = ascending(x);
    let ys = ascending(y);
    let mut sx = 0.0;
    let mut sy = 0.0;
    let k_slacks: Vec<f64> = xs
        .iter()
        .zip(&ys)
        .map(|(a, b)| {
            sx += a;
            sy += b;
            sx - sy
        })
        .collect();
    let weakly_supermajorized = k_slacks.iter().all(|s| *s >= -tol);
    let majorized = weakly_supermajorized && k_slacks[k_slacks.len() - 1].abs() <= tol;
    Ok(MajorizationReport {
        k_slacks,
        weakly_supermajorized,
        majorized,
        tol,
    })
}

/// Same report as [`check_weak_supermajorization`]; read `majorized`.
pub fn check_majorization(x: &[f64], y: &[f64], tol: f64) -> Result<MajorizationReport> {
    check_weak_supermajorization(x, y, tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoublyStochasticWitness {
    pub e: RealMatrix,
    /// max over rows of `|Σ_j E_ij − 1|`
    pub row_residual: f64,
    pub col_residual: f64,
    /// `‖E y − x‖_∞`
    pub map_residual: f64,
    /// Number of T-transforms in the chain.
    pub transforms: usize,
}

impl DoublyStochasticWitness {
    pub fn min_entry(&self) -> f64 {
        self.e.min()
    }
}

fn descending_order(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[b].total_cmp(&v[a]));
    idx
}

/// Builds `E` as a chain of at most `n − 1` T-transforms.
///
/// In descending coordinates, repeatedly take the last index `j` with
/// `y_j > x_j` and the first `k > j` with `y_k < x_k`, and move
/// `δ = min(y_j − x_j, x_k − y_k)` from `y_j` to `y_k`. Each step matches one
/// more coordinate exactly.
pub fn doubly_stochastic_witness(x: &[f64], y: &[f64]) -> Result<DoublyStochasticWitness> {
    let report = check_majorization(x, y, default_tolerance(y))?;
    if !report.majorized {
        let k = report.first_violation().unwrap_or(report.k_slacks.len());
        let slack = report.k_slacks[k - 1];
        return Err(Error::NotMajorized { k, slack });
    }
    let n = x.len();
    let px = descending_order(x);
    let py = descending_order(y);
    let xs: Vec<f64> = px.iter().map(|&i| x[i]).collect();
    let mut ys: Vec<f64> = py.iter().map(|&i| y[i]).collect();

    // chain product in sorted coordinates, applied on the left
    let mut t_chain = RealMatrix::identity(n, n);
    let mut transforms = 0;
    // Rounding in earlier steps can leave a coordinate a few ulps off its
    // target; such coordinates count as matched.
    let eps = 16.0 * f64::EPSILON * ys.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    for _ in 0..n {
        let Some(j) = (0..n).rev().find(|&i| ys[i] - xs[i] > eps) else {
            break;
        };
        let Some(k) = (j + 1..n).find(|&i| xs[i] - ys[i] > eps) else {
            break;
        };
        let gap = ys[j] - ys[k];
        let delta = (ys[j] - xs[j]).min(xs[k] - ys[k]);
        // T = t I + (1 − t) P_jk, with (1 − t)(y_j − y_k) = δ
        let t = 1.0 - delta / gap;
        let mut step = RealMatrix::identity(n, n);
        step[(j, j)] = t;
        step[(k, k)] = t;
        step[(j, k)] = 1.0 - t;
        step[(k, j)] = 1.0 - t;
        t_chain = step * t_chain;
        if ys[j] - xs[j] <= xs[k] - ys[k] {
            ys[k] += ys[j] - xs[j];
            ys[j] = xs[j];
        } else {
            ys[j] -= xs[k] - ys[k];
            ys[k] = xs[k];
        }
        transforms += 1;
    }

    // x[px[a]] = xs[a] and ys[b] = y[py[b]], so E[px[a], py[b]] = T[a, b].
    let mut e = RealMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            e[(px[a], py[b])] = t_chain[(a, b)];
        }
    }
    let row_residual = (0..n)
        .map(|i| (e.row(i).sum() - 1.0).abs())
        .fold(0.0, f64::max);
    let col_residual = (0..n)
        .map(|j| (e.column(j).sum() - 1.0).abs())
        .fold(0.0, f64::max);
    let ey = &e * nalgebra::DVector::from_column_slice(y);
    let map_residual = ey
        .iter()
        .zip(x)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(DoublyStochasticWitness {
        e,
        row_residual,
        col_residual,
        map_residual,
        transforms,
    })
}
