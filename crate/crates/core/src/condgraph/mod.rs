//! Condition graphs for miss events `{a_1, …, a_m ∉ A + A}`.
//!
//! Vertex `v ∈ [0, N]` stands for the element `v` of `A`; an edge `{u, v}`
//! records the requirement "`u ∉ A` or `v ∉ A`" (because `u + v` is a target)
//! and a forced vertex `v` (with `2v` a target) must be absent from `A`.
//! A miss event happens exactly when the complement of `A` is a vertex cover
//! containing every forced vertex, so its probability is the number of such
//! covers over `2^(N+1)`.

mod cover;
mod graph;
mod lambda;
mod pair;

pub use cover::{config_prob, count_covers_general, count_covers_path, MAX_GENERAL_VERTICES};
pub use graph::{build_graph, decompose, Component, ComponentProfile, ConditionGraph};
pub use lambda::{
    estimate_lambda, lambda_upper_bound, parse_config_list, LambdaEstimate, LambdaUpperBound,
    MAX_CONFIG_OFFSET, MAX_UPPER_BOUND_OFFSET,
};
pub use pair::{
    consecutive_bounds, pair_asymptotic_bounds, pair_prob_closed_form, pair_prob_exact,
    single_prob_exact, ClosedForm, ClosedFormParams,
};
