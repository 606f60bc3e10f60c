//! Representation counts `r(s) = #{(a, b) ∈ S×S : a + b = s}` with
//! single-element updates.

use crate::error::{Error, Result};
use crate::subset::BitSubset;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepCounts {
    set: BitSubset,
    counts: Vec<u32>,
    /// Bit `s` set iff `counts[s] == 0`.
    missing: u128,
}

impl RepCounts {
    pub fn from_set(set: BitSubset) -> Self {
        let n = set.window() as usize;
        let mut counts = vec![0u32; 2 * n - 1];
        for a in set.iter() {
            for b in set.iter() {
                counts[(a + b) as usize] += 1;
            }
        }
        let missing = missing_mask(&counts);
        RepCounts {
            set,
            counts,
            missing,
        }
    }

    pub fn window(&self) -> u32 {
        self.set.window()
    }

    pub fn set(&self) -> &BitSubset {
        &self.set
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, s: u32) -> u32 {
        self.counts.get(s as usize).copied().unwrap_or(0)
    }

    /// Mask of sums in `[0, 2n-1)` with zero representations.
    pub fn missing_mask(&self) -> u128 {
        self.missing
    }

    /// Inserts (`inserted = true`) or removes `x`, adjusting `r(x+b)` by 2 for
    /// each other member `b` and `r(2x)` by 1.
    pub fn update(&mut self, x: u32, inserted: bool) -> Result<()> {
        if x >= self.window() {
            return Err(Error::invalid(format!(
                "position {x} outside window {}",
                self.window()
            )));
        }
        if self.set.contains(x) == inserted {
            return Err(Error::Consistency(format!(
                "toggle direction mismatch at {x}: already {}",
                if inserted { "present" } else { "absent" }
            )));
        }
        if inserted {
            self.set.toggle(x);
            let mut rest = self.set.mask();
            while rest != 0 {
                let b = rest.trailing_zeros();
                rest &= rest - 1;
                let s = (x + b) as usize;
                let add = if b == x { 1 } else { 2 };
                if self.counts[s] == 0 {
                    self.missing &= !(1u128 << s);
                }
                self.counts[s] += add;
            }
        } else {
            let mut rest = self.set.mask();
            while rest != 0 {
                let b = rest.trailing_zeros();
                rest &= rest - 1;
                let s = (x + b) as usize;
                let sub = if b == x { 1 } else { 2 };
                self.counts[s] = self.counts[s].checked_sub(sub).ok_or_else(|| {
                    Error::Consistency(format!("representation count underflow at sum {s}"))
                })?;
                if self.counts[s] == 0 {
                    self.missing |= 1u128 << s;
                }
            }
            self.set.toggle(x);
        }
        Ok(())
    }
}

fn missing_mask(counts: &[u32]) -> u128 {
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == 0)
        .fold(0u128, |m, (s, _)| m | 1u128 << s)
}

/// Functional form of [`RepCounts::update`].
pub fn update_repcounts(mut rc: RepCounts, x: u32, inserted: bool) -> Result<RepCounts> {
    rc.update(x, inserted)?;
    Ok(rc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rc_of(n: u32, elems: &[u32]) -> RepCounts {
        RepCounts::from_set(BitSubset::from_elements(n, elems.iter().copied()).unwrap())
    }

    #[test]
    fn insert_two_into_singleton() {
        let rc = update_repcounts(rc_of(5, &[0]), 2, true).unwrap();
        assert_eq!(rc.count(2), 2);
        assert_eq!(rc.count(4), 1);
        assert_eq!(rc.count(0), 1);
        assert_eq!(rc, rc_of(5, &[0, 2]));
    }

    #[test]
    fn remove_one_from_pair() {
        let before = rc_of(3, &[0, 1]);
        assert_eq!(before.count(1), 2);
        assert_eq!(before.count(2), 1);
        let after = update_repcounts(before, 1, false).unwrap();
        assert_eq!(after, rc_of(3, &[0]));
    }

    #[test]
    fn direction_mismatch_is_consistency_error() {
        assert!(matches!(
            update_repcounts(rc_of(4, &[0]), 0, true),
            Err(Error::Consistency(_))
        ));
        assert!(matches!(
            update_repcounts(rc_of(4, &[0]), 3, false),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn long_random_toggle_sequence_matches_recount() {
        let n = 16;
        let mut rc = rc_of(n, &[]);
        let mut state = 12345u64;
        for _ in 0..20_000 {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let x = (state % n as u64) as u32;
            let inserting = !rc.set().contains(x);
            rc.update(x, inserting).unwrap();
        }
        assert_eq!(rc, RepCounts::from_set(*rc.set()));
    }

    proptest! {
        #[test]
        fn incremental_equals_from_scratch(n in 1u32..=40, toggles in prop::collection::vec(0u32..40, 0..200)) {
            let mut rc = rc_of(n, &[]);
            for t in toggles {
                let x = t % n;
                let inserting = !rc.set().contains(x);
                rc.update(x, inserting).unwrap();
                let total: u64 = rc.counts().iter().map(|&c| c as u64).sum();
                prop_assert_eq!(total, (rc.set().len() as u64).pow(2));
            }
            prop_assert_eq!(&rc, &RepCounts::from_set(*rc.set()));
        }
    }
}
