use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::subset::{count_bits_in, WideSet, MAX_WIDE_WINDOW};

/// Samples drawn from one ChaCha8 stream; stream `c` serves samples
/// `c·CHUNK .. (c+1)·CHUNK`, so results do not depend on the worker count.
pub const CHUNK: u64 = 1 << 16;

/// Tabulated values `k = 0..TALLY_LEN`; larger values count as overflow.
pub const TALLY_LEN: usize = 64;

pub const GENERATOR: &str =
    "ChaCha8Rng (rand_chacha), seed_from_u64(seed), stream = sample / 65536";

/// What a tally counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TallyKind {
    /// Missing sums below `W` for uniform `E ⊆ [0, W)` forced to contain 0.
    Z,
    /// Missing sums below `W` for uniform `E ⊆ [0, W)`.
    Y,
    /// `M = 2n - 1 - |A + A|` for uniform `A ⊆ [0, n)`.
    M,
}

impl TallyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TallyKind::Z => "z",
            TallyKind::Y => "y",
            TallyKind::M => "m",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "z" => Ok(TallyKind::Z),
            "y" => Ok(TallyKind::Y),
            "m" => Ok(TallyKind::M),
            _ => Err(Error::invalid(format!("unknown tally kind {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TallyTable {
    pub kind: TallyKind,
    pub window: usize,
    pub samples: u64,
    pub seed: u64,
    pub counts: Vec<u64>,
    pub overflow: u64,
}

impl TallyTable {
    pub fn estimate(&self, k: usize) -> f64 {
        self.counts.get(k).copied().unwrap_or(0) as f64 / self.samples as f64
    }

    /// Standard error of `estimate(a) - estimate(b)` under the multinomial model.
    pub fn difference_se(&self, a: usize, b: usize) -> f64 {
        let (pa, pb) = (self.estimate(a), self.estimate(b));
        ((pa + pb - (pa - pb) * (pa - pb)) / self.samples as f64).sqrt()
    }
}

pub(crate) fn check_sampling(window: usize, samples: u64) -> Result<()> {
    if window == 0 || window > MAX_WIDE_WINDOW {
        return Err(Error::capacity(format!(
            "window {window} outside 1..={MAX_WIDE_WINDOW}"
        )));
    }
    if samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    Ok(())
}

/// Runs `per_sample` on `samples` random sets, chunked over ChaCha8 streams,
/// and folds the per-chunk states with `merge`.
pub(crate) fn run_chunks<S, F, G>(
    window: usize,
    samples: u64,
    seed: u64,
    fill_zero: bool,
    init: impl Fn() -> S + Sync,
    per_sample: F,
    merge: G,
) -> Result<S>
where
    S: Send,
    F: Fn(&mut S, &WideSet, &[u64]) + Sync,
    G: Fn(S, S) -> S + Sync,
{
    check_sampling(window, samples)?;
    let chunks = samples.div_ceil(CHUNK);
    let partials: Vec<S> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let mut state = init();
            let mut set = WideSet::empty(window).expect("window checked");
            let mut sums = Vec::new();
            let n = CHUNK.min(samples - c * CHUNK);
            for _ in 0..n {
                set.fill_from_words(|| rng.next_u64());
                if fill_zero {
                    set.insert(0);
                }
                set.sumset_into(&mut sums);
                per_sample(&mut state, &set, &sums);
            }
            state
        })
        .collect();
    // fixed chunk order keeps the fold deterministic
    let mut iter = partials.into_iter();
    let first = iter.next().expect("at least one chunk");
    Ok(iter.fold(first, merge))
}

fn tally(
    kind: TallyKind,
    window: usize,
    samples: u64,
    seed: u64,
    value: impl Fn(&WideSet, &[u64]) -> usize + Sync,
) -> Result<TallyTable> {
    let counts = run_chunks(
        window,
        samples,
        seed,
        kind == TallyKind::Z,
        || vec![0u64; TALLY_LEN + 1],
        |c, set, sums| {
            let k = value(set, sums).min(TALLY_LEN);
            c[k] += 1;
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    )?;
    Ok(TallyTable {
        kind,
        window,
        samples,
        seed,
        overflow: counts[TALLY_LEN],
        counts: counts[..TALLY_LEN].to_vec(),
    })
}

/// Number of `s < w` missing from the sum mask.
pub fn missing_below(sums: &[u64], w: usize) -> usize {
    w - count_bits_in(sums, 0, w)
}

/// Tally of missing sums in `[0, W)` over random `E ⊆ [0, W)` with `0 ∈ E`.
pub fn sample_z(samples: u64, window: usize, seed: u64) -> Result<TallyTable> {
    tally(TallyKind::Z, window, samples, seed, |_, sums| {
        missing_below(sums, window)
    })
}

/// Tally of missing sums in `[0, W)` over uniform `E ⊆ [0, W)`.
pub fn sample_y(samples: u64, window: usize, seed: u64) -> Result<TallyTable> {
    tally(TallyKind::Y, window, samples, seed, |_, sums| {
        missing_below(sums, window)
    })
}

/// Tally of `M = 2n - 1 - |A + A|` over uniform `A ⊆ [0, n)`.
pub fn sample_m(n: usize, samples: u64, seed: u64) -> Result<TallyTable> {
    tally(TallyKind::M, n, samples, seed, |_, sums| {
        missing_below(sums, 2 * n - 1)
    })
}
