//! Monte Carlo estimates of `z`, `y`, `m` and fringe statistics.

mod confidence;
mod csv;
mod fringe;
mod sampler;

pub use confidence::{clopper_pearson, confidence, ConfidenceRow, ConfidenceTable};
pub use csv::{
    parse_estimates_csv, tally_to_csv, EstimateRow, EstimatesTable, ESTIMATES_CSV_HEADER,
};
pub use fringe::{fringe_of, fringe_stats, FringeRow, FringeStats};
pub use sampler::{
    missing_below, sample_m, sample_y, sample_z, TallyKind, TallyTable, CHUNK, GENERATOR, TALLY_LEN,
};
