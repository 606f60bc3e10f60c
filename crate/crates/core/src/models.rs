//! Geometric and Poisson models for `z`, with `y` and `m` derived from them.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `z(k) = (1-λ) λ^k`, `0 < λ < 1`.
    Geometric,
    /// `z(k) = λ^k e^(-λ) / k!`, `λ > 0`.
    Poisson,
}

impl Family {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "geometric" => Ok(Family::Geometric),
            "poisson" => Ok(Family::Poisson),
            _ => Err(Error::invalid(format!("unknown model family {s:?}"))),
        }
    }

    /// Default scan range.
    pub fn range(self) -> (f64, f64) {
        match self {
            Family::Geometric => (0.0, 1.0),
            Family::Poisson => (0.0, 20.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelCurve {
    pub family: Family,
    pub lambda: f64,
    pub z: Vec<f64>,
    pub y: Vec<f64>,
    pub m: Vec<f64>,
    /// `1 - Σ_{k≤K} z(k)`.
    pub z_tail: f64,
    /// `1 - Σ_{k≤K} m(k)`.
    pub m_tail: f64,
}

/// `y(k) = Σ_{i≤k/2} 2^-(i+1) x(k-2i)`.
pub fn y_from_z(z: &[f64]) -> Vec<f64> {
    (0..z.len())
        .map(|k| {
            (0..=k / 2)
                .map(|i| 0.5f64.powi(i as i32 + 1) * z[k - 2 * i])
                .sum()
        })
        .collect()
}

/// `out(k) = Σ_{i≤k} x(i) x(k-i)`.
pub fn self_convolve(x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|k| (0..=k).map(|i| x[i] * x[k - i]).sum())
        .collect()
}

fn model_z(family: Family, lambda: f64, k_max: usize) -> Vec<f64> {
    let mut z = Vec::with_capacity(k_max + 1);
    match family {
        Family::Geometric => {
            let mut p = 1.0 - lambda;
            for _ in 0..=k_max {
                z.push(p);
                p *= lambda;
            }
        }
        Family::Poisson => {
            let mut p = (-lambda).exp();
            for k in 0..=k_max {
                z.push(p);
                p *= lambda / (k as f64 + 1.0);
            }
        }
    }
    z
}

fn check_lambda(family: Family, lambda: f64) -> Result<()> {
    let ok = match family {
        Family::Geometric => lambda > 0.0 && lambda < 1.0,
        Family::Poisson => lambda > 0.0 && lambda.is_finite(),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "λ = {lambda} outside the {family:?} range"
        )))
    }
}

/// `z`, `y`, `m` for `k ≤ k_max`. Each `y(k)`, `m(k)` only involves `z(j)`
/// with `j ≤ k`, so the values are exact; the tails record the mass beyond.
pub fn model_curve(family: Family, lambda: f64, k_max: usize) -> Result<ModelCurve> {
    check_lambda(family, lambda)?;
    let z = model_z(family, lambda, k_max);
    let y = y_from_z(&z);
    let m = self_convolve(&y);
    Ok(ModelCurve {
        family,
        lambda,
        z_tail: 1.0 - z.iter().sum::<f64>(),
        m_tail: 1.0 - m.iter().sum::<f64>(),
        z,
        y,
        m,
    })
}

/// What counts as "a divot at `at`".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivotRule {
    /// `m(0) < … < m(at-1)`, then `m(at) < m(at-1)` and `m(at) < m(at+1)`.
    Bimodal,
    /// Only `m(at) < m(at-1)` and `m(at) < m(at+1)`.
    TwoSided,
}

impl DivotRule {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "bimodal" => Ok(DivotRule::Bimodal),
            "two-sided" => Ok(DivotRule::TwoSided),
            _ => Err(Error::invalid(format!("unknown divot rule {s:?}"))),
        }
    }
}

pub fn has_divot(m: &[f64], at: usize, rule: DivotRule) -> bool {
    if at == 0 || at + 1 >= m.len() {
        return false;
    }
    let dip = m[at] < m[at - 1] && m[at] < m[at + 1];
    match rule {
        DivotRule::TwoSided => dip,
        DivotRule::Bimodal => dip && m[..at].windows(2).all(|w| w[0] < w[1]),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivotScan {
    pub family: Family,
    pub rule: DivotRule,
    pub at: usize,
    pub grid_step: f64,
    /// Maximal λ-intervals where the divot is present, endpoints refined by bisection.
    pub intervals: Vec<(f64, f64)>,
}

fn divot_at(family: Family, lambda: f64, at: usize, rule: DivotRule) -> bool {
    let z = model_z(family, lambda, at + 1);
    has_divot(&self_convolve(&y_from_z(&z)), at, rule)
}

/// Boundary between `good` (predicate true) and `bad` to within `tol`.
fn refine(mut good: f64, mut bad: f64, tol: f64, pred: impl Fn(f64) -> bool) -> f64 {
    while (good - bad).abs() > tol {
        let mid = 0.5 * (good + bad);
        if pred(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    0.5 * (good + bad)
}

/// Scans the open parameter range on a grid of `grid_step` and reports the
/// maximal divot intervals with endpoints refined to `1e-7`.
pub fn divot_scan(family: Family, at: usize, rule: DivotRule, grid_step: f64) -> Result<DivotScan> {
    if !(grid_step > 0.0 && grid_step <= 1e-4) {
        return Err(Error::invalid(format!(
            "grid step {grid_step} must lie in (0, 1e-4]"
        )));
    }
    let (lo, hi) = family.range();
    let points = ((hi - lo) / grid_step).round() as usize;
    let grid: Vec<f64> = (1..points).map(|i| lo + i as f64 * grid_step).collect();
    let flags: Vec<bool> = grid
        .par_iter()
        .map(|&l| divot_at(family, l, at, rule))
        .collect();
    let pred = |l: f64| divot_at(family, l, at, rule);
    let mut intervals = Vec::new();
    let mut i = 0;
    while i < grid.len() {
        if !flags[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i < grid.len() && flags[i] {
            i += 1;
        }
        let left = if start == 0 {
            lo
        } else {
            refine(grid[start], grid[start - 1], 1e-7, pred)
        };
        let right = if i == grid.len() {
            hi
        } else {
            refine(grid[i - 1], grid[i], 1e-7, pred)
        };
        intervals.push((left, right));
    }
    Ok(DivotScan {
        family,
        rule,
        at,
        grid_step,
        intervals,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaFit {
    pub lambda: f64,
    /// `estimate - model` per `k`.
    pub residuals: Vec<f64>,
    /// Weighted squared residual of each `k` over the total.
    pub shares: Vec<f64>,
    pub weighted_sse: f64,
    pub largest_share_k: usize,
}

fn sse(z_hat: &[f64], w: &[f64], lambda: f64) -> f64 {
    let z = model_z(Family::Geometric, lambda, z_hat.len() - 1);
    z_hat
        .iter()
        .zip(&z)
        .zip(w)
        .map(|((a, b), w)| w * (a - b) * (a - b))
        .sum()
}

/// Least-squares geometric `λ` for estimates `z_hat[k]`, optionally weighted.
pub fn fit_lambda(z_hat: &[f64], weights: Option<&[f64]>) -> Result<LambdaFit> {
    if z_hat.is_empty() || z_hat.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::invalid("estimates must be finite and non-negative"));
    }
    if z_hat.iter().all(|&x| x == 0.0) {
        return Err(Error::invalid("all estimates are zero"));
    }
    let ones = vec![1.0; z_hat.len()];
    let w = match weights {
        Some(w) if w.len() != z_hat.len() => {
            return Err(Error::invalid("one weight per estimate required"))
        }
        Some(w) if w.iter().any(|x| !x.is_finite() || *x < 0.0) => {
            return Err(Error::invalid("weights must be finite and non-negative"))
        }
        Some(w) => w,
        None => &ones[..],
    };
    let f = |l: f64| sse(z_hat, w, l);
    // coarse grid, then golden section around the best cell
    let cells = 2000;
    let best = (1..cells)
        .map(|i| i as f64 / cells as f64)
        .min_by(|a, b| f(*a).total_cmp(&f(*b)))
        .unwrap();
    let (mut a, mut b) = (best - 1.0 / cells as f64, best + 1.0 / cells as f64);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    while b - a > 1e-12 {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    let lambda = 0.5 * (a + b);
    let model = model_z(Family::Geometric, lambda, z_hat.len() - 1);
    let residuals: Vec<f64> = z_hat.iter().zip(&model).map(|(a, b)| a - b).collect();
    let parts: Vec<f64> = residuals.iter().zip(w).map(|(r, w)| w * r * r).collect();
    let total: f64 = parts.iter().sum();
    let shares: Vec<f64> = parts
        .iter()
        .map(|p| if total > 0.0 { p / total } else { 0.0 })
        .collect();
    let largest_share_k = shares
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .unwrap_or(0);
    Ok(LambdaFit {
        lambda,
        residuals,
        shares,
        weighted_sse: total,
        largest_share_k,
    })
}
