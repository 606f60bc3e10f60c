//! Reflected-binary Gray enumeration of prefixes `β ⊆ [0, n)` with `0 ∈ β`.
//!
//! Positions `1..n1` are toggled (lowest position fastest); positions in
//! `[n1, n)` are fixed by the shard pattern.

use crate::error::{Error, Result};
use crate::subset::{BitSubset, MAX_WORD_WINDOW};

#[derive(Clone, Debug)]
pub struct GrayIter {
    current: BitSubset,
    step: u64,
    total: u64,
}

/// Enumerates every `β` with `0 ∈ β` and `β ∩ [n1, n) = shard`.
///
/// Yields `(β, toggled)` where `toggled` is `None` for the first item and the
/// flipped position afterwards.
pub fn gray_iterate(n: u32, n1: u32, shard: u64) -> Result<GrayIter> {
    if n > MAX_WORD_WINDOW {
        return Err(Error::capacity(format!(
            "window {n} exceeds the {MAX_WORD_WINDOW}-bit enumeration limit"
        )));
    }
    if n1 == 0 || n1 > n {
        return Err(Error::invalid(format!(
            "split point n1={n1} outside 1..={n}"
        )));
    }
    if shard & ((1u64 << n1) - 1) != 0 || shard >> n != 0 {
        return Err(Error::invalid(format!(
            "shard mask {shard:#x} has bits outside [{n1}, {n})"
        )));
    }
    Ok(GrayIter {
        current: BitSubset::from_mask(n, shard | 1)?,
        step: 0,
        total: 1u64 << (n1 - 1),
    })
}

impl GrayIter {
    pub fn len_total(&self) -> u64 {
        self.total
    }
}

impl Iterator for GrayIter {
    type Item = (BitSubset, Option<u32>);

    fn next(&mut self) -> Option<Self::Item> {
        if self.step >= self.total {
            return None;
        }
        let toggled = if self.step == 0 {
            None
        } else {
            let pos = 1 + self.step.trailing_zeros();
            self.current.toggle(pos);
            Some(pos)
        };
        self.step += 1;
        Some((self.current, toggled))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = (self.total - self.step) as usize;
        (rest, Some(rest))
    }
}

impl ExactSizeIterator for GrayIter {}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn elems(s: &BitSubset) -> Vec<u32> {
        s.iter().collect()
    }

    #[test]
    fn three_bit_reflected_order() {
        let items: Vec<_> = gray_iterate(3, 3, 0).unwrap().collect();
        let sets: Vec<_> = items.iter().map(|(s, _)| elems(s)).collect();
        assert_eq!(sets, vec![vec![0], vec![0, 1], vec![0, 1, 2], vec![0, 2]]);
        let toggles: Vec<_> = items.iter().map(|(_, t)| *t).collect();
        assert_eq!(toggles, vec![None, Some(1), Some(2), Some(1)]);
    }

    #[test]
    fn two_bit() {
        let sets: Vec<_> = gray_iterate(2, 2, 0)
            .unwrap()
            .map(|(s, _)| elems(&s))
            .collect();
        assert_eq!(sets, vec![vec![0], vec![0, 1]]);
    }

    #[test]
    fn fixed_high_bits() {
        let sets: Vec<_> = gray_iterate(4, 2, 0b100)
            .unwrap()
            .map(|(s, _)| elems(&s))
            .collect();
        // by definition: 0 ∈ β, β ∩ [2,4) = {2}, position 1 free
        let mut expect = vec![];
        for m in 0u64..16 {
            if m & 1 == 1 && m & 0b1100 == 0b100 {
                expect.push(elems(&BitSubset::from_mask(4, m).unwrap()));
            }
        }
        assert_eq!(sets, expect);
    }

    #[test]
    fn exhaustive_and_single_step_up_to_twenty() {
        for n1 in 1..=20u32 {
            let n = n1 + 3;
            let shard = 0b101u64 << n1;
            let mut seen = HashSet::new();
            let mut prev: Option<u64> = None;
            for (s, t) in gray_iterate(n, n1, shard).unwrap() {
                assert!(seen.insert(s.mask()), "duplicate mask");
                assert_eq!(s.mask() & 1, 1);
                assert_eq!(s.mask() >> n1, shard >> n1);
                if let Some(p) = prev {
                    let diff = p ^ s.mask();
                    assert_eq!(diff.count_ones(), 1);
                    let pos = t.unwrap();
                    assert_eq!(diff, 1 << pos);
                    assert!((1..n1).contains(&pos));
                }
                prev = Some(s.mask());
            }
            assert_eq!(seen.len() as u64, 1u64 << (n1 - 1));
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(gray_iterate(64, 10, 0), Err(Error::Capacity(_))));
        assert!(gray_iterate(5, 0, 0).is_err());
        assert!(gray_iterate(5, 6, 0).is_err());
        assert!(gray_iterate(5, 3, 0b10).is_err());
        assert!(gray_iterate(5, 3, 1 << 5).is_err());
    }
}
