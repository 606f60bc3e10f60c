//! Exhaustive enumeration oracles. Slow by design and independent of the
//! graph and bounds machinery they are used to check.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::dyadic::DyadicProb;
use crate::error::{Error, Result};
use crate::subset::sumset_mask;

/// Largest window enumerated exhaustively.
pub const MAX_BRUTE_WINDOW: u32 = 30;

/// The exact law of `M = 2n - 1 - |A + A|` for uniform `A ⊆ [0, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDistribution {
    window: u32,
    counts: Vec<u64>,
}

impl ExactDistribution {
    pub fn window(&self) -> u32 {
        self.window
    }

    /// Number of subsets with exactly `k` missing sums, `k = 0..=2n-1`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn mass(&self, k: usize) -> DyadicProb {
        match self.counts.get(k) {
            Some(&c) => DyadicProb::from_count(c, self.window),
            None => DyadicProb::zero(),
        }
    }

    pub fn masses(&self) -> Vec<DyadicProb> {
        (0..self.counts.len()).map(|k| self.mass(k)).collect()
    }

    /// `E[M^r]` as an exact rational.
    pub fn moment(&self, r: u32) -> BigRational {
        let mut acc = BigUint::zero();
        for (k, &c) in self.counts.iter().enumerate() {
            acc += BigUint::from(c) * BigUint::from(k as u64).pow(r);
        }
        BigRational::new(
            acc.into(),
            (BigUint::from(1u8) << self.window as usize).into(),
        )
    }
}

fn check_window(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("window must be positive"));
    }
    if n > MAX_BRUTE_WINDOW {
        return Err(Error::capacity(format!(
            "exhaustive enumeration limited to windows <= {MAX_BRUTE_WINDOW}, got {n}"
        )));
    }
    Ok(())
}

/// Splits `0..2^n` into contiguous blocks for parallel enumeration.
fn blocks(n: u32) -> impl ParallelIterator<Item = std::ops::Range<u64>> {
    let total = 1u64 << n;
    let block = (total / 256).max(1 << 10).min(total);
    (0..total.div_ceil(block))
        .into_par_iter()
        .map(move |b| b * block..((b + 1) * block).min(total))
}

/// Exact `m_n(k)` for all `k` by enumerating every subset of `[0, n)`.
pub fn brute_distribution(n: u32) -> Result<ExactDistribution> {
    check_window(n)?;
    let len = 2 * n as usize;
    let counts = blocks(n)
        .map(|range| {
            let mut c = vec![0u64; len];
            for mask in range {
                let present = sumset_mask(mask).count_ones() as usize;
                c[len - 1 - present] += 1;
            }
            c
        })
        .reduce(
            || vec![0u64; len],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(ExactDistribution { window: n, counts })
}

/// `P(all targets ∉ A + A)` with `A` uniform over subsets of `[0, max target]`.
pub fn brute_config_prob(targets: &[u32]) -> Result<DyadicProb> {
    let top = *targets
        .iter()
        .max()
        .ok_or_else(|| Error::invalid("empty target list"))?;
    brute_config_prob_in(targets, top + 1)
}

/// As [`brute_config_prob`] but over subsets of `[0, window)`.
pub fn brute_config_prob_in(targets: &[u32], window: u32) -> Result<DyadicProb> {
    if targets.is_empty() {
        return Err(Error::invalid("empty target list"));
    }
    check_window(window)?;
    if targets.iter().any(|&t| t > 2 * window - 2) {
        return Err(Error::invalid("target beyond the largest possible sum"));
    }
    let want: u128 = targets.iter().fold(0, |m, &t| m | 1u128 << t);
    let hits: u64 = blocks(window)
        .map(|range| range.filter(|&mask| sumset_mask(mask) & want == 0).count() as u64)
        .sum();
    Ok(DyadicProb::from_count(hits, window))
}

/// Counts over all `A ⊆ [0, n)` of the events `i ∉ A+A` and `i, j ∉ A+A`.
#[derive(Clone, Debug)]
pub struct PairTable {
    pub window: u32,
    /// `single[i]` = number of `A` with `i ∉ A + A`.
    pub single: Vec<u64>,
    /// `pair[i][j]` (`i < j`) = number of `A` with `i, j ∉ A + A`.
    pub pair: Vec<Vec<u64>>,
}

impl PairTable {
    pub fn single_prob(&self, i: usize) -> DyadicProb {
        DyadicProb::from_count(self.single[i], self.window)
    }

    pub fn pair_prob(&self, i: usize, j: usize) -> DyadicProb {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        DyadicProb::from_count(self.pair[a][b], self.window)
    }
}

/// Per-element and per-pair miss counts at window `n`, by direct enumeration.
pub fn brute_pair_table(n: u32) -> Result<PairTable> {
    check_window(n)?;
    if n > 22 {
        return Err(Error::capacity("pair tables limited to windows <= 22"));
    }
    let len = 2 * n as usize - 1;
    let mut single = vec![0u64; len];
    let mut pair = vec![vec![0u64; len]; len];
    for mask in 0..1u64 << n {
        let missing = !sumset_mask(mask) & ((1u128 << len) - 1);
        let idx: Vec<usize> = crate::subset::BitIter(missing)
            .map(|b| b as usize)
            .collect();
        for (a, &i) in idx.iter().enumerate() {
            single[i] += 1;
            for &j in &idx[a + 1..] {
                pair[i][j] += 1;
            }
        }
    }
    Ok(PairTable {
        window: n,
        single,
        pair,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_one() {
        let d = brute_distribution(1).unwrap();
        assert_eq!(d.mass(0), DyadicProb::from_count(1, 1));
        assert_eq!(d.mass(1), DyadicProb::from_count(1, 1));
    }

    #[test]
    fn masses_sum_to_one() {
        for n in 1..=12 {
            let d = brute_distribution(n).unwrap();
            let total = d.masses().iter().fold(DyadicProb::zero(), |a, b| &a + b);
            assert_eq!(total, DyadicProb::one(), "n = {n}");
        }
    }

    #[test]
    fn expectation_matches_per_sum_enumeration() {
        let n = 8;
        let d = brute_distribution(n).unwrap();
        let table = brute_pair_table(n).unwrap();
        let per_sum: u64 = table.single.iter().sum();
        assert_eq!(d.moment(1), BigRational::new(per_sum.into(), 256.into()));
    }

    #[test]
    fn config_examples() {
        assert_eq!(
            brute_config_prob(&[0]).unwrap(),
            DyadicProb::from_count(1, 1)
        );
        assert_eq!(
            brute_config_prob(&[3, 7]).unwrap(),
            DyadicProb::from_count(1, 2)
        );
        assert_eq!(
            brute_config_prob(&[2, 3]).unwrap(),
            DyadicProb::from_count(5, 4)
        );
        assert!(matches!(
            brute_config_prob(&[]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(brute_distribution(31), Err(Error::Capacity(_))));
    }

    #[test]
    fn window_padding_does_not_change_config_probability() {
        for targets in [&[1u32, 4][..], &[5], &[2, 3, 6]] {
            let tight = brute_config_prob(targets).unwrap();
            let top = *targets.iter().max().unwrap();
            assert_eq!(brute_config_prob_in(targets, top + 4).unwrap(), tight);
        }
    }

    #[test]
    fn reflection_symmetry_at_ten() {
        let n = 10usize;
        let t = brute_pair_table(n as u32).unwrap();
        let top = 2 * n - 2;
        for i in 0..n {
            for j in i + 1..n {
                assert_eq!(t.pair[i][j], t.pair[top - j][top - i], "({i},{j})");
            }
        }
    }
}
