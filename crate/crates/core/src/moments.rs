//! Mean and variance of the number of missing sums.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::brute::{brute_distribution, brute_pair_table};
use crate::condgraph::{pair_prob_exact, single_prob_exact};
use crate::error::{Error, Result};

const PHI: f64 = 1.618_033_988_749_895;

/// Constant of the published exponential tail estimate `87 (φ/2)^N`.
pub const GOLDEN_TAIL_CONSTANT: f64 = 87.0;

/// `lim E[M_n]` and the sums it is assembled from.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectationReport {
    /// Exactly 10.
    pub value: BigRational,
    /// `Σ_t P(t ∉ A + A)` over one fringe; exactly 5.
    pub one_sided: BigRational,
    /// `2 Σ_{t ≤ T} P(t ∉ A + A)` for `T = 0, 1, …, audit_len - 1`.
    pub partial_sums: Vec<BigRational>,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// The limiting mean, from the geometric fringe sums
/// `Σ_even (1/2)(3/4)^(t/2) = 2` and `Σ_odd (3/4)^((t+1)/2) = 3`.
pub fn expectation_limit(audit_len: u32) -> ExpectationReport {
    let q = ratio(3, 4);
    let one = ratio(1, 1);
    // Σ_{s≥0} q^s = 1/(1-q)
    let geo = &one / (&one - &q);
    let even = ratio(1, 2) * &geo;
    let odd = &q * &geo;
    let one_sided = even + odd;
    let value = &one_sided * ratio(2, 1);
    let mut partial_sums = Vec::with_capacity(audit_len as usize);
    let mut acc = BigRational::zero();
    for t in 0..audit_len {
        acc += single_prob_exact(t).to_ratio() * ratio(2, 1);
        partial_sums.push(acc.clone());
    }
    ExpectationReport {
        value,
        one_sided,
        partial_sums,
    }
}

/// The truncated variance series and its error bars.
#[derive(Clone, Debug, PartialEq)]
pub struct VarianceReport {
    pub terms: u32,
    /// `4 Σ_{0≤i<j≤N} P(i, j ∉ A + A) - 40`, exact.
    pub partial_sum: BigRational,
    pub partial_sum_f64: f64,
    /// `87 (φ/2)^N`.
    pub tail_bound: f64,
    /// `4 Σ_{j>N} j (3/4)^(j/2)`, from `P(i, j ∉ A+A) ≤ P(j ∉ A+A)`.
    pub rigorous_tail: f64,
    /// `partial ± max(tail_bound, rigorous_tail)`.
    pub value_interval: (f64, f64),
    /// `Σ_{i<j} P(i, j ∉ A + A)` for `j = 0..=N`.
    pub row_sums: Vec<f64>,
    /// Whether `Σ_{N'≤i<j≤N} P(i, j ∉ A + A) ≤ 87 (φ/2)^N'` for every `N' ≤ N`.
    /// That estimate only covers pairs with both entries past the cutoff.
    pub golden_tail_consistent: bool,
}

/// Rigorous bound on `4 Σ_{j>N} Σ_{i<j} P(i, j ∉ A + A)`.
pub fn variance_rigorous_tail(terms: u32) -> f64 {
    let r = 0.75f64.sqrt();
    let n1 = terms as f64 + 1.0;
    4.0 * r.powf(n1) * (n1 * (1.0 - r) + r) / ((1.0 - r) * (1.0 - r))
}

/// Evaluates the variance series through pairs with `j ≤ terms`.
pub fn variance_series(terms: u32) -> Result<VarianceReport> {
    if terms < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 terms, got {terms}"
        )));
    }
    // row j as a numerator over 2^(j+1), plus its entries as floats
    let rows: Vec<(BigUint, Vec<f64>)> = (0..=terms)
        .into_par_iter()
        .map(|j| {
            let mut num = BigUint::zero();
            let mut entries = Vec::with_capacity(j as usize);
            for i in 0..j {
                let p = pair_prob_exact(i, j)?;
                entries.push(p.to_f64());
                num += p.numerator_at(j + 1);
            }
            Ok((num, entries))
        })
        .collect::<Result<_>>()?;
    let top = terms + 1;
    let mut total = BigUint::zero();
    for (j, (row, _)) in rows.iter().enumerate() {
        total += row << (top - (j as u32 + 1));
    }
    let denom = BigInt::from(BigUint::from(1u8) << top);
    let partial_sum =
        BigRational::new(BigInt::from(total) * 4, denom) - BigRational::from_integer(40.into());
    let partial_sum_f64 = partial_sum.to_f64().unwrap_or(f64::NAN);
    let row_sums: Vec<f64> = rows
        .iter()
        .enumerate()
        .map(|(j, (r, _))| crate::dyadic::big_ratio_f64(r, j as u32 + 1))
        .collect();
    let tail_bound = GOLDEN_TAIL_CONSTANT * (PHI / 2.0).powi(terms as i32);
    let rigorous_tail = variance_rigorous_tail(terms);
    let half = tail_bound.max(rigorous_tail);
    let mut columns = vec![0.0; terms as usize + 1];
    for (_, entries) in &rows {
        for (i, p) in entries.iter().enumerate() {
            columns[i] += p;
        }
    }
    let mut golden_tail_consistent = true;
    let mut suffix = 0.0;
    for n in (0..=terms).rev() {
        suffix += columns[n as usize];
        if suffix > GOLDEN_TAIL_CONSTANT * (PHI / 2.0).powi(n as i32) {
            golden_tail_consistent = false;
        }
    }
    Ok(VarianceReport {
        terms,
        partial_sum,
        partial_sum_f64,
        tail_bound,
        rigorous_tail,
        value_interval: (partial_sum_f64 - half, partial_sum_f64 + half),
        row_sums,
        golden_tail_consistent,
    })
}

/// `E[M_n^r]` by exhaustive enumeration.
pub fn brute_moments(n: u32, r: u32) -> Result<BigRational> {
    if n > 22 {
        return Err(Error::capacity(format!(
            "moments enumerated for n <= 22, got {n}"
        )));
    }
    Ok(brute_distribution(n)?.moment(r))
}

/// Both sides of `E[M_n^2] = 2 Σ_{i<j} P_n(i, j ∉ A+A) + Σ_i P_n(i ∉ A+A)`,
/// the left from the distribution and the right from a pair table.
pub fn second_moment_identity(n: u32) -> Result<(BigRational, BigRational)> {
    let lhs = brute_moments(n, 2)?;
    let table = brute_pair_table(n)?;
    let mut count = BigUint::zero();
    for (i, row) in table.pair.iter().enumerate() {
        count += BigUint::from(table.single[i]);
        for &c in &row[i + 1..] {
            count += BigUint::from(c) * 2u8;
        }
    }
    let rhs = BigRational::new(count.into(), BigInt::from(BigUint::from(1u8) << n));
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute::brute_config_prob;

    #[test]
    fn expectation_is_ten() {
        let e = expectation_limit(41);
        assert_eq!(e.value, ratio(10, 1));
        assert_eq!(e.one_sided, ratio(5, 1));
        let last = e.partial_sums.last().unwrap().to_f64().unwrap();
        assert!((last - 10.0).abs() <= 10.0 * 0.75f64.powi(20));
        assert!(e.partial_sums.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn variance_two_terms_by_hand() {
        let sum = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| brute_config_prob(&[i, j]).unwrap().to_ratio())
            .fold(BigRational::zero(), |a, b| a + b);
        let report = variance_series(2).unwrap();
        assert_eq!(report.partial_sum, sum * ratio(4, 1) - ratio(40, 1));
        assert!(variance_series(1).is_err());
    }

    #[test]
    fn variance_intervals_shrink() {
        let a = variance_series(40).unwrap();
        let b = variance_series(41).unwrap();
        let width = |r: &VarianceReport| r.value_interval.1 - r.value_interval.0;
        assert!(width(&b) < width(&a));
        assert!(b.partial_sum > a.partial_sum);
    }

    #[test]
    fn rigorous_tail_dominates_direct_tail() {
        let short = variance_series(20).unwrap();
        let long = variance_series(80).unwrap();
        let gap = (&long.partial_sum - &short.partial_sum).to_f64().unwrap();
        assert!(gap > 0.0 && gap <= short.rigorous_tail);
        assert!(long.golden_tail_consistent);
    }

    #[test]
    fn small_moments() {
        assert_eq!(brute_moments(1, 1).unwrap(), ratio(1, 2));
        assert!(brute_moments(23, 1).is_err());
    }

    #[test]
    fn second_moment_identity_small() {
        for n in 1..=8 {
            let (lhs, rhs) = second_moment_identity(n).unwrap();
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }
}
