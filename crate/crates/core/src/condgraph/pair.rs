use num_bigint::BigUint;
use num_traits::One;

use super::build_graph;
use super::cover::count_via_paths;
use crate::dyadic::DyadicProb;
use crate::error::{Error, Result};
use crate::fib::fib;

const PHI: f64 = 1.618_033_988_749_895;

/// Exact `P(i, j ∉ A + A)` for any parities, from the path decomposition of
/// the pair's condition graph.
pub fn pair_prob_exact(i: u32, j: u32) -> Result<DyadicProb> {
    if i >= j {
        return Err(Error::invalid(format!(
            "pair requires i < j, got ({i}, {j})"
        )));
    }
    let g = build_graph(&[i, j], 0)?;
    Ok(DyadicProb::new(count_via_paths(&g)?, j + 1))
}

/// Exact `P(k ∉ A + A)`: `(3/4)^((k+1)/2)` for odd `k`, `(1/2)(3/4)^(k/2)` for even `k`.
pub fn single_prob_exact(k: u32) -> DyadicProb {
    if k % 2 == 1 {
        DyadicProb::pow3_over_pow2(k.div_ceil(2), k + 1)
    } else {
        DyadicProb::pow3_over_pow2(k / 2, k + 1)
    }
}

/// Parameters of the Fibonacci-product formula for a pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormParams {
    pub q: i64,
    pub r: i64,
    pub r_prime: i64,
    /// Odd-end index for even `i`.
    pub o: Option<i64>,
    /// Even-end index for even `j`.
    pub o_prime: Option<i64>,
}

/// The Fibonacci-product closed form and whether it agrees with the exact value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub params: ClosedFormParams,
    /// `None` when `r` or `r'` is negative or not an integer.
    pub value: Option<DyadicProb>,
    pub exact: DyadicProb,
    pub valid: bool,
}

fn half(x: i64) -> Option<i64> {
    (x >= 0 && x % 2 == 0).then_some(x / 2)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    (a + b - 1).div_euclid(b)
}

/// Evaluates the four-case Fibonacci-product formula literally and checks it
/// against [`pair_prob_exact`].
pub fn pair_prob_closed_form(i: u32, j: u32) -> Result<ClosedForm> {
    let exact = pair_prob_exact(i, j)?;
    let (ii, jj) = (i as i64, j as i64);
    let d = jj - ii;
    let c = ceil_div(ii + 1, d);
    let q = 2 * c;
    let o = (ii % 2 == 0).then(|| 2 * ceil_div(ii / 2 + 1, d) - 1);
    let o_prime = (jj % 2 == 0).then(|| 2 * ceil_div(jj / 2 + 1, d) - 2);
    let (r2, r2_prime) = match (o, o_prime) {
        (None, None) => (d * c - (ii + 1), jj + 1 - d * c),
        (Some(o), None) => ((d - 1) * c - (ii + 1) + o, jj - (d - 1) * c - o),
        (None, Some(op)) => ((d - 1) * c - (ii + 1) + op, jj - (d - 1) * c - op),
        (Some(o), Some(op)) => (
            (d - 2) * c - (ii + 1) + o + op,
            jj - 1 - (d - 2) * c - o - op,
        ),
    };
    let r = half(r2);
    let r_prime = half(r2_prime);
    let params = ClosedFormParams {
        q,
        r: r.unwrap_or(r2),
        r_prime: r_prime.unwrap_or(r2_prime),
        o,
        o_prime,
    };
    let value = match (r, r_prime) {
        (Some(r), Some(rp)) => {
            let mut num = fib((q + 2) as u32).pow(r as u32) * fib((q + 4) as u32).pow(rp as u32);
            if let Some(o) = o {
                num *= fib(o as u32);
            }
            if let Some(op) = o_prime {
                // F_{o'+2} alone, F_{o'} when paired with an odd-end factor
                num *= if o.is_some() {
                    fib(op as u32)
                } else {
                    fib((op + 2) as u32)
                };
            }
            if num > BigUint::one() << (j + 1) {
                None
            } else {
                Some(DyadicProb::new(num, j + 1))
            }
        }
        _ => None,
    };
    let valid = value.as_ref() == Some(&exact);
    Ok(ClosedForm {
        params,
        value,
        exact,
        valid,
    })
}

/// Golden-ratio envelope `(lower, upper)` for `P(i, j ∉ A + A)`.
///
/// `upper = φ^(2j+1) 5^(i/4) / (2^(j+1) 5^(j/4) φ^i)`, and
/// `lower = upper · max(0, 1 - (j-i) φ^(-i/(j-i)))`.
pub fn pair_asymptotic_bounds(i: u32, j: u32) -> Result<(f64, f64)> {
    if i >= j {
        return Err(Error::invalid(format!(
            "pair requires i < j, got ({i}, {j})"
        )));
    }
    let (fi, fj) = (i as f64, j as f64);
    let ln_upper = (2.0 * fj + 1.0) * PHI.ln() + fi / 4.0 * 5f64.ln()
        - (fj + 1.0) * 2f64.ln()
        - fj / 4.0 * 5f64.ln()
        - fi * PHI.ln();
    let upper = ln_upper.exp();
    let gap = fj - fi;
    let factor = (1.0 - gap * PHI.powf(-fi / gap)).max(0.0);
    Ok((upper * factor, upper))
}

/// `(lower, upper)` for `P(k+1, …, k+m ∉ A + A)`:
/// `lower = (1/2)^(⌊(k+m)/2⌋+1)` exactly, `upper = 2^(k/m) (1/2)^((k+m)/2)`.
pub fn consecutive_bounds(k: u32, m: u32) -> Result<(DyadicProb, f64)> {
    if m == 0 {
        return Err(Error::invalid("need at least one consecutive target"));
    }
    let lower = DyadicProb::from_count(1, (k + m) / 2 + 1);
    let upper = 2f64.powf(k as f64 / m as f64 - (k + m) as f64 / 2.0);
    Ok((lower, upper))
}
