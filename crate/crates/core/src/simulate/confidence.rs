use statrs::function::beta::beta_reg;

use super::sampler::TallyTable;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ConfidenceRow {
    pub k: usize,
    pub count: u64,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConfidenceTable {
    pub level: f64,
    pub rows: Vec<ConfidenceRow>,
}

/// Smallest `p` with `I_p(a, b) ≥ target`, by bisection.
fn beta_quantile(a: f64, b: f64, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if beta_reg(a, b, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Exact (Clopper–Pearson) interval for a binomial proportion with `x`
/// successes in `trials`.
pub fn clopper_pearson(x: u64, trials: u64, level: f64) -> Result<(f64, f64)> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid(format!(
            "confidence level {level} outside (0, 1)"
        )));
    }
    if trials == 0 || x > trials {
        return Err(Error::invalid(format!("{x} successes in {trials} trials")));
    }
    let alpha = 1.0 - level;
    let (xf, nf) = (x as f64, trials as f64);
    let lower = if x == 0 {
        0.0
    } else {
        beta_quantile(xf, nf - xf + 1.0, alpha / 2.0)
    };
    let upper = if x == trials {
        1.0
    } else {
        beta_quantile(xf + 1.0, nf - xf, 1.0 - alpha / 2.0)
    };
    Ok((lower, upper))
}

/// Per-`k` exact binomial intervals at the given level.
pub fn confidence(t: &TallyTable, level: f64) -> Result<ConfidenceTable> {
    let rows = t
        .counts
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let (lower, upper) = clopper_pearson(c, t.samples, level)?;
            Ok(ConfidenceRow {
                k,
                count: c,
                estimate: t.estimate(k),
                lower,
                upper,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ConfidenceTable { level, rows })
}
