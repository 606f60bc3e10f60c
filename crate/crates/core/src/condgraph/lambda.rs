use num_bigint::BigUint;
use rayon::prelude::*;

use super::config_prob;
use crate::dyadic::DyadicProb;
use crate::error::{Error, Result};

/// Largest `a_m` accepted by [`lambda_upper_bound`].
pub const MAX_UPPER_BOUND_OFFSET: u32 = 24;

/// Exact two-set probability and the resulting bound on `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaUpperBound {
    pub config: Vec<u32>,
    /// `A` and `B` range over subsets of `[0, half_width)`.
    pub half_width: u32,
    pub probability: DyadicProb,
    pub bound: f64,
}

/// Exact configuration probabilities `p_k` and a Fekete bracket for `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaEstimate {
    pub config: Vec<u32>,
    pub samples: Vec<(u32, DyadicProb)>,
    /// `p_{k+1} / p_k` for consecutive samples.
    pub ratios: Vec<f64>,
    pub lambda_low: f64,
    pub lambda_high: f64,
    /// `sqrt(p_kmax / p_{kmax-2})`, when both are sampled.
    pub point: Option<f64>,
    pub fekete_constant: f64,
}

/// Largest offset accepted by [`parse_config_list`].
pub const MAX_CONFIG_OFFSET: u32 = 1 << 16;

/// Parses a comma-separated, strictly increasing offset list such as `0,1,3`.
pub fn parse_config_list(text: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for (i, part) in text.trim().split(',').enumerate() {
        let part = part.trim();
        if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::parse(
                1,
                format!("entry {} is not a number: {part:?}", i + 1),
            ));
        }
        let v: u32 = part
            .parse()
            .ok()
            .filter(|&v| v <= MAX_CONFIG_OFFSET)
            .ok_or_else(|| Error::parse(1, format!("offset {part} exceeds {MAX_CONFIG_OFFSET}")))?;
        if out.last().is_some_and(|&last| last >= v) {
            return Err(Error::parse(1, "offsets must be strictly increasing"));
        }
        out.push(v);
    }
    Ok(out)
}

fn check_config(config: &[u32]) -> Result<()> {
    if config.is_empty() {
        return Err(Error::invalid("configuration must be non-empty"));
    }
    if config.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(
            "configuration offsets must be strictly increasing",
        ));
    }
    Ok(())
}

/// `P(a_1, …, a_m ∉ A + B)^(1/(a_m+2))` for independent uniform
/// `A, B ⊆ [0, ⌊a_m/2⌋]`.
pub fn lambda_upper_bound(config: &[u32]) -> Result<LambdaUpperBound> {
    check_config(config)?;
    let am = *config.last().unwrap();
    if am > MAX_UPPER_BOUND_OFFSET {
        return Err(Error::capacity(format!(
            "largest offset {am} exceeds the enumeration limit {MAX_UPPER_BOUND_OFFSET}"
        )));
    }
    let h = am / 2 + 1;
    let full = (1u64 << h) - 1;
    // forbid[a] = the b < h with a + b in the configuration
    let forbid: Vec<u64> = (0..h)
        .map(|a| {
            config
                .iter()
                .filter(|&&t| t >= a && t - a < h)
                .fold(0u64, |m, &t| m | 1 << (t - a))
        })
        .collect();
    let total: BigUint = (0..=full)
        .into_par_iter()
        .map(|amask| {
            let f = (0..h)
                .filter(|&a| amask >> a & 1 == 1)
                .fold(0u64, |m, a| m | forbid[a as usize]);
            1u64 << (h - f.count_ones())
        })
        .map(BigUint::from)
        .sum();
    let probability = DyadicProb::new(total, 2 * h);
    let bound = probability.to_f64().powf(1.0 / (am as f64 + 2.0));
    Ok(LambdaUpperBound {
        config: config.to_vec(),
        half_width: h,
        probability,
        bound,
    })
}

/// Exact `p_k = P(k + a_1, …, k + a_m ∉ A + A)` for `k_min ≤ k ≤ k_max`,
/// with `λ` bracketed by `(p_k / c)^(1/k) ≤ λ ≤ (c p_k)^(1/k)`, `c = 2^(a_m+1)`.
pub fn estimate_lambda(config: &[u32], k_min: u32, k_max: u32) -> Result<LambdaEstimate> {
    check_config(config)?;
    if k_min > k_max {
        return Err(Error::invalid(format!(
            "k_min {k_min} exceeds k_max {k_max}"
        )));
    }
    let am = *config.last().unwrap();
    let samples = (k_min..=k_max)
        .into_par_iter()
        .map(|k| {
            let shifted: Vec<u32> = config.iter().map(|&a| a + k).collect();
            config_prob(&shifted).map(|p| (k, p))
        })
        .collect::<Result<Vec<_>>>()?;
    let log_c = (am as f64 + 1.0) * std::f64::consts::LN_2;
    let log_p: Vec<f64> = samples.iter().map(|(_, p)| log_dyadic(p)).collect();
    let ratios = log_p.windows(2).map(|w| (w[1] - w[0]).exp()).collect();
    let mut lambda_low: f64 = 0.0;
    let mut lambda_high: f64 = 1.0;
    for (&(k, _), &lp) in samples.iter().zip(&log_p) {
        if k == 0 {
            continue;
        }
        lambda_low = lambda_low.max(((lp - log_c) / k as f64).exp());
        lambda_high = lambda_high.min(((lp + log_c) / k as f64).exp());
    }
    let point = (samples.len() >= 3).then(|| {
        let n = log_p.len();
        ((log_p[n - 1] - log_p[n - 3]) / 2.0).exp()
    });
    Ok(LambdaEstimate {
        config: config.to_vec(),
        samples,
        ratios,
        lambda_low,
        lambda_high,
        point,
        fekete_constant: (log_c).exp(),
    })
}

fn log_dyadic(p: &DyadicProb) -> f64 {
    let bits = p.numerator().bits();
    let shift = bits.saturating_sub(60);
    let top = (p.numerator() >> shift)
        .to_u64_digits()
        .first()
        .copied()
        .unwrap_or(0) as f64;
    top.ln() + (shift as f64 - p.exp() as f64) * std::f64::consts::LN_2
}
