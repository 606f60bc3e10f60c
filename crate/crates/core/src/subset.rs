//! Finite subsets of a window `[0, n)` stored as bit masks.

use std::fmt;

use crate::error::{Error, Result};

/// Largest window that fits the single-word representation.
pub const MAX_WORD_WINDOW: u32 = 63;

/// Largest window supported by [`WideSet`].
pub const MAX_WIDE_WINDOW: usize = 1024;

/// A subset of `[0, window)` held in one machine word.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitSubset {
    window: u32,
    mask: u64,
}

impl BitSubset {
    pub fn empty(window: u32) -> Result<Self> {
        if window == 0 || window > MAX_WORD_WINDOW {
            return Err(Error::capacity(format!(
                "window {window} outside 1..={MAX_WORD_WINDOW}"
            )));
        }
        Ok(BitSubset { window, mask: 0 })
    }

    pub fn from_mask(window: u32, mask: u64) -> Result<Self> {
        let s = Self::empty(window)?;
        if mask >> window != 0 {
            return Err(Error::invalid(format!(
                "mask {mask:#x} has bits outside [0, {window})"
            )));
        }
        Ok(BitSubset { mask, ..s })
    }

    pub fn from_elements(window: u32, elems: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut s = Self::empty(window)?;
        for e in elems {
            if e >= window {
                return Err(Error::invalid(format!("element {e} outside [0, {window})")));
            }
            s.mask |= 1 << e;
        }
        Ok(s)
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, x: u32) -> bool {
        x < self.window && self.mask >> x & 1 == 1
    }

    /// Flips membership of `x`; returns true if `x` is now present.
    pub fn toggle(&mut self, x: u32) -> bool {
        debug_assert!(x < self.window);
        self.mask ^= 1 << x;
        self.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        BitIter(self.mask as u128)
    }

    /// `|S ∩ [0, t]|`.
    pub fn count_upto(&self, t: u32) -> u32 {
        if t >= 63 {
            self.len()
        } else {
            (self.mask & ((2u64 << t) - 1)).count_ones()
        }
    }

    /// Bit mask of `S + S` over `[0, 2n-1)`.
    pub fn sumset(&self) -> u128 {
        sumset_mask(self.mask)
    }

    /// Number of sums in `[0, 2n-2]` missing from `S + S`.
    pub fn missing_sums(&self) -> u32 {
        2 * self.window - 1 - self.sumset().count_ones()
    }
}

impl fmt::Debug for BitSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Sum-set mask of a word-sized set: bit `s` is set iff `s = a + b` with `a, b ∈ mask`.
#[inline]
pub fn sumset_mask(mask: u64) -> u128 {
    let wide = mask as u128;
    let mut out = 0u128;
    let mut rest = mask;
    while rest != 0 {
        let a = rest.trailing_zeros();
        out |= wide << a;
        rest &= rest - 1;
    }
    out
}

/// Iterator over the set bits of a mask, lowest first.
#[derive(Clone, Copy, Debug)]
pub struct BitIter(pub u128);

impl Iterator for BitIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// A subset of `[0, window)` for windows up to [`MAX_WIDE_WINDOW`], stored as words.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WideSet {
    window: usize,
    words: Vec<u64>,
}

impl WideSet {
    pub fn empty(window: usize) -> Result<Self> {
        if window == 0 || window > MAX_WIDE_WINDOW {
            return Err(Error::capacity(format!(
                "window {window} outside 1..={MAX_WIDE_WINDOW}"
            )));
        }
        Ok(WideSet {
            window,
            words: vec![0; window.div_ceil(64)],
        })
    }

    /// Fills the set from raw words, discarding bits at or above the window.
    pub fn fill_from_words(&mut self, mut next_word: impl FnMut() -> u64) {
        for w in self.words.iter_mut() {
            *w = next_word();
        }
        let tail = self.window % 64;
        if tail != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << tail) - 1;
        }
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn insert(&mut self, x: usize) {
        debug_assert!(x < self.window);
        self.words[x / 64] |= 1 << (x % 64);
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.window && self.words[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Writes the mask of `S + S` (over `[0, 2·window - 1)`) into `out`.
    pub fn sumset_into(&self, out: &mut Vec<u64>) {
        let nw = self.words.len();
        out.clear();
        out.resize(2 * nw + 1, 0);
        for (wi, &word) in self.words.iter().enumerate() {
            let mut rest = word;
            while rest != 0 {
                let a = wi * 64 + rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let (ws, bs) = (a / 64, a % 64);
                if bs == 0 {
                    for (j, &w) in self.words.iter().enumerate() {
                        out[ws + j] |= w;
                    }
                } else {
                    for (j, &w) in self.words.iter().enumerate() {
                        out[ws + j] |= w << bs;
                        out[ws + j + 1] |= w >> (64 - bs);
                    }
                }
            }
        }
    }
}

/// Whether bit `s` of a word-array mask is set.
#[inline]
pub fn word_bit(words: &[u64], s: usize) -> bool {
    words.get(s / 64).is_some_and(|w| w >> (s % 64) & 1 == 1)
}

/// Number of set bits of a word-array mask in `[lo, hi)`.
pub fn count_bits_in(words: &[u64], lo: usize, hi: usize) -> usize {
    count_below(words, hi) - count_below(words, lo.min(hi))
}

fn count_below(words: &[u64], hi: usize) -> usize {
    let full = (hi / 64).min(words.len());
    let mut c: usize = words[..full].iter().map(|w| w.count_ones() as usize).sum();
    if full < words.len() && !hi.is_multiple_of(64) {
        c += (words[full] & ((1u64 << (hi % 64)) - 1)).count_ones() as usize;
    }
    c
}
