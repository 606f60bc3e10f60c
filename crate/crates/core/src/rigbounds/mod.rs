//! Rigorous bounds on `z(k)` by enumerating every prefix `β ⊆ [0, n)` with
//! `0 ∈ β`, and the bounds on `y`, `m`, `w` they imply.

mod accumulator;
mod beta;
mod checkpoint;
mod interval;
mod run;

pub use accumulator::{enumerate_shard, shard_count, BoundsAccumulator, MAX_SHARD_BITS};
pub use beta::{analyze_beta, analyze_masks, BetaAnalysis, TABULATED};
pub use checkpoint::{
    checkpoint_load, checkpoint_merge, checkpoint_save, checkpoint_to_string, format_ranges,
    parse_checkpoint, parse_ranges, CHECKPOINT_MAGIC, CHECKPOINT_VERSION,
};
pub use interval::{
    combine, derive_convolution, derive_y, interval_to_csv, parse_interval_csv, DistKind,
    IntervalVector, INTERVAL_CSV_HEADER,
};
pub use run::{merge_dir, run_shards, shard_path, RunSummary};
