use super::sampler::{run_chunks, TALLY_LEN};
use crate::error::Result;
use crate::subset::word_bit;

/// Conditional means of `X_n` (index of the first present sum) and `W_n`
/// (left end of the longest run of present sums) given `M = k`.
#[derive(Clone, Debug, PartialEq)]
pub struct FringeStats {
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    /// One entry per `k < 64`; `None` when no sample had `M = k`.
    pub rows: Vec<Option<FringeRow>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FringeRow {
    pub count: u64,
    pub mean_first_present: f64,
    pub mean_run_start: f64,
}

#[derive(Clone)]
struct Sums {
    count: Vec<u64>,
    first: Vec<u64>,
    run_start: Vec<u64>,
}

/// `(X, W, M)` for one sum mask over `[0, len)`; an empty sumset gives `X = W = len`.
pub fn fringe_of(sums: &[u64], len: usize) -> (usize, usize, usize) {
    let mut first = len;
    let (mut best_start, mut best_len) = (len, 0);
    let mut run = 0;
    let mut missing = 0;
    for s in 0..len {
        if word_bit(sums, s) {
            if first == len {
                first = s;
            }
            run += 1;
            if run > best_len {
                best_len = run;
                best_start = s + 1 - run;
            }
        } else {
            missing += 1;
            run = 0;
        }
    }
    (first, best_start, missing)
}

pub fn fringe_stats(n: usize, samples: u64, seed: u64) -> Result<FringeStats> {
    let len = 2 * n - 1;
    let empty = Sums {
        count: vec![0; TALLY_LEN],
        first: vec![0; TALLY_LEN],
        run_start: vec![0; TALLY_LEN],
    };
    let totals = run_chunks(
        n,
        samples,
        seed,
        false,
        || empty.clone(),
        |acc, _, sums| {
            let (x, w, k) = fringe_of(sums, len);
            if k < TALLY_LEN {
                acc.count[k] += 1;
                acc.first[k] += x as u64;
                acc.run_start[k] += w as u64;
            }
        },
        |mut a, b| {
            for k in 0..TALLY_LEN {
                a.count[k] += b.count[k];
                a.first[k] += b.first[k];
                a.run_start[k] += b.run_start[k];
            }
            a
        },
    )?;
    let rows = (0..TALLY_LEN)
        .map(|k| {
            let c = totals.count[k];
            (c > 0).then(|| FringeRow {
                count: c,
                mean_first_present: totals.first[k] as f64 / c as f64,
                mean_run_start: totals.run_start[k] as f64 / c as f64,
            })
        })
        .collect();
    Ok(FringeStats {
        n,
        samples,
        seed,
        rows,
    })
}
