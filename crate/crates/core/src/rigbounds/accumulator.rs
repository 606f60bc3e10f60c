use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::Zero;

use super::beta::{analyze_masks, WordTotals, TABULATED};
use crate::error::{Error, Result};
use crate::gray::gray_iterate;
use crate::repcounts::RepCounts;
use crate::subset::{BitSubset, MAX_WORD_WINDOW};

/// Largest number of shard bits `n - n1`.
pub const MAX_SHARD_BITS: u32 = 20;

/// Prefixes folded into word-sized totals before moving them into big integers.
const FLUSH_EVERY: u64 = 1 << 32;

/// Summed Lower/Upper/Overhang vectors over a set of shards.
///
/// All entries are integers scaled by `2^n` per prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsAccumulator {
    pub n: u32,
    pub n1: u32,
    /// Shard indices `s`, each standing for the fixed bits `β ∩ [n1, n) = s << n1`.
    pub shards: BTreeSet<u64>,
    pub processed: u64,
    pub lower: Vec<BigUint>,
    pub upper: Vec<BigUint>,
    pub overhang: Vec<BigUint>,
}

/// Validates `(n, n1)` and returns the number of shards.
pub fn shard_count(n: u32, n1: u32) -> Result<u64> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "window must be at least 2, got {n}"
        )));
    }
    if n > MAX_WORD_WINDOW {
        return Err(Error::capacity(format!(
            "window {n} exceeds the enumeration limit {MAX_WORD_WINDOW}"
        )));
    }
    if n1 == 0 || n1 > n {
        return Err(Error::invalid(format!(
            "split point n1={n1} outside 1..={n}"
        )));
    }
    if n - n1 > MAX_SHARD_BITS {
        return Err(Error::capacity(format!(
            "{} shard bits exceed the limit {MAX_SHARD_BITS}",
            n - n1
        )));
    }
    Ok(1u64 << (n - n1))
}

impl BoundsAccumulator {
    pub fn empty(n: u32, n1: u32) -> Result<Self> {
        shard_count(n, n1)?;
        Ok(BoundsAccumulator {
            n,
            n1,
            shards: BTreeSet::new(),
            processed: 0,
            lower: vec![BigUint::zero(); TABULATED],
            upper: vec![BigUint::zero(); TABULATED],
            overhang: vec![BigUint::zero(); TABULATED],
        })
    }

    pub(crate) fn absorb(&mut self, t: &WordTotals) {
        for k in 0..TABULATED {
            self.lower[k] += t.lower[k];
            self.upper[k] += t.upper[k];
            self.overhang[k] += t.overhang[k];
        }
    }

    /// Entrywise sum; the shard sets must be disjoint and `(n, n1)` equal.
    pub fn merge(&mut self, other: &BoundsAccumulator) -> Result<()> {
        if (self.n, self.n1) != (other.n, other.n1) {
            return Err(Error::Consistency(format!(
                "cannot merge (n, n1) = ({}, {}) with ({}, {})",
                self.n, self.n1, other.n, other.n1
            )));
        }
        if let Some(dup) = self.shards.intersection(&other.shards).next() {
            return Err(Error::Coverage(format!("shard {dup} merged twice")));
        }
        self.shards.extend(other.shards.iter().copied());
        self.processed += other.processed;
        for k in 0..TABULATED {
            self.lower[k] += &other.lower[k];
            self.upper[k] += &other.upper[k];
            self.overhang[k] += &other.overhang[k];
        }
        Ok(())
    }

    /// True when every shard is present and every prefix was processed.
    pub fn is_complete(&self) -> bool {
        let expected = 1u64 << (self.n - self.n1);
        self.shards.len() as u64 == expected && self.processed == 1u64 << (self.n - 1)
    }

    /// Checks the invariants that hold for any accumulator.
    pub fn validate(&self) -> Result<()> {
        shard_count(self.n, self.n1)?;
        let total = 1u64 << (self.n - self.n1);
        if let Some(&bad) = self.shards.iter().find(|&&s| s >= total) {
            return Err(Error::Consistency(format!("shard {bad} out of range")));
        }
        if self.processed != self.shards.len() as u64 * (1u64 << (self.n1 - 1)) {
            return Err(Error::Consistency(format!(
                "processed count {} does not match {} shards",
                self.processed,
                self.shards.len()
            )));
        }
        if [&self.lower, &self.upper, &self.overhang]
            .iter()
            .any(|v| v.len() != TABULATED)
        {
            return Err(Error::Consistency("vectors must have 32 entries".into()));
        }
        let cap = BigUint::from(self.processed) << self.n;
        for k in 0..TABULATED {
            if self.lower[k] > self.upper[k] || self.upper[k] > cap {
                return Err(Error::Consistency(format!("entry {k} out of range")));
            }
        }
        Ok(())
    }
}

/// Sums the contributions of every prefix in shard `shard`
/// (`β ∩ [n1, n) = shard << n1`) in Gray-code order.
pub fn enumerate_shard(n: u32, n1: u32, shard: u64) -> Result<BoundsAccumulator> {
    let count = shard_count(n, n1)?;
    if shard >= count {
        return Err(Error::invalid(format!("shard {shard} outside 0..{count}")));
    }
    let mut acc = BoundsAccumulator::empty(n, n1)?;
    let pattern = shard << n1;
    let iter = gray_iterate(n, n1, pattern)?;
    let mut rc = RepCounts::from_set(BitSubset::from_mask(n, pattern | 1)?);
    let mut totals = WordTotals::new();
    let mut pending = 0u64;
    for (beta, toggled) in iter {
        if let Some(x) = toggled {
            rc.update(x, beta.contains(x))?;
        }
        totals.add(&analyze_masks(n, beta.mask(), rc.missing_mask()));
        pending += 1;
        if pending == FLUSH_EVERY {
            acc.absorb(&totals);
            totals = WordTotals::new();
            acc.processed += pending;
            pending = 0;
        }
    }
    acc.absorb(&totals);
    acc.processed += pending;
    acc.shards.insert(shard);
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigbounds::beta::analyze_beta;

    fn direct(n: u32) -> BoundsAccumulator {
        let mut acc = BoundsAccumulator::empty(n, n).unwrap();
        let mut t = WordTotals::new();
        for mask in (1u64..1 << n).step_by(2) {
            let b = BitSubset::from_mask(n, mask).unwrap();
            t.add(&analyze_beta(&b, &RepCounts::from_set(b)).unwrap());
        }
        acc.absorb(&t);
        acc.processed = 1 << (n - 1);
        acc.shards.insert(0);
        acc
    }

    fn big(v: &[u64]) -> Vec<BigUint> {
        let mut out: Vec<BigUint> = v.iter().map(|&x| BigUint::from(x)).collect();
        out.resize(TABULATED, BigUint::zero());
        out
    }

    #[test]
    fn window_two_by_hand() {
        let acc = enumerate_shard(2, 2, 0).unwrap();
        assert_eq!(acc.upper, big(&[3, 6, 4]));
        assert_eq!(acc.overhang, big(&[6, 14]));
        assert_eq!(acc.lower, big(&[]));
        assert!(acc.is_complete());
        acc.validate().unwrap();
    }

    #[test]
    fn gray_matches_direct_enumeration() {
        assert_eq!(enumerate_shard(12, 12, 0).unwrap(), direct(12));
    }

    #[test]
    fn shards_merge_to_single_run() {
        let n = 12;
        let mut merged = BoundsAccumulator::empty(n, n - 2).unwrap();
        for s in 0..4 {
            merged
                .merge(&enumerate_shard(n, n - 2, s).unwrap())
                .unwrap();
        }
        assert!(merged.is_complete());
        let single = enumerate_shard(n, n, 0).unwrap();
        assert_eq!(merged.lower, single.lower);
        assert_eq!(merged.upper, single.upper);
        assert_eq!(merged.overhang, single.overhang);
    }

    #[test]
    fn merge_rejects_duplicates_and_mismatch() {
        let a = enumerate_shard(8, 7, 1).unwrap();
        let mut b = a.clone();
        assert!(matches!(b.merge(&a), Err(Error::Coverage(_))));
        let c = enumerate_shard(8, 8, 0).unwrap();
        assert!(b.merge(&c).is_err());
    }

    #[test]
    fn argument_checks() {
        assert!(enumerate_shard(12, 10, 4).is_err());
        assert!(matches!(
            enumerate_shard(64, 60, 0),
            Err(Error::Capacity(_))
        ));
        assert!(enumerate_shard(12, 0, 0).is_err());
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            enumerate_shard(14, 12, 3).unwrap(),
            enumerate_shard(14, 12, 3).unwrap()
        );
    }
}
