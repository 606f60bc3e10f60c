//! Missing sums of random sumsets `A + A` for uniform `A ⊆ [0, n)`.
//!
//! `M = 2n - 1 - |A + A|` counts the missing sums; `m(k)` is the limiting
//! probability that `M = k`. The crate computes exact probabilities of miss
//! events, the limiting variance, rigorous interval bounds on `m(k)` and its
//! fringe relatives, Monte Carlo estimates, and simple parametric models.

pub mod brute;
pub mod condgraph;
pub mod dyadic;
pub mod error;
pub mod fib;
pub mod gray;
pub mod models;
pub mod moments;
pub mod repcounts;
pub mod rigbounds;
pub mod simulate;
pub mod subset;

pub use dyadic::DyadicProb;
pub use error::{Error, Result};
pub use repcounts::RepCounts;
pub use subset::BitSubset;
