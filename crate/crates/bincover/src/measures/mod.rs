//! Evaluators for the four performance measures: worst-order values,
//! random-order expectations, min/min ratios, and competitive-ratio
//! tables for size-restricted intervals.

mod competitive;
mod markov;
mod minmin;
mod random_order;
mod two_size;
mod worst_order;

pub use competitive::{competitive_table, size_profile, CompetitiveTable, SizeProfile, TableEntry};
pub use markov::{markov_stationary, MarkovChain};
pub use minmin::{minmin_ratio_dhk, minmin_ratio_dnf, minmin_unrestricted, MinMinReport};
pub use random_order::{
    exhaustive_expected_covered, random_order_estimate, RandomOrderEstimate, RatioEstimate,
};
pub use two_size::{exact_expected_dnf_two_size, exhaustive_expected_dnf_two_size};
pub use worst_order::{
    dnf_worst_order_bounds, worst_order_value, DnfWorstOrderBounds, WorstOrderMode,
    WorstOrderValue, DEFAULT_ARRANGEMENT_BUDGET,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MeasureError {
    #[error("exact enumeration needs {arrangements} distinct orderings, budget is {budget}")]
    BudgetExceeded { arrangements: String, budget: u64 },
    #[error("item {item} lies outside the interval {interval}")]
    OutOfInterval { item: String, interval: String },
    #[error("interval contains no border 1/p; both algorithms behave alike there")]
    NoBorder,
    #[error("interval contains more than two borders; no closed form is implemented")]
    ManyBorders,
    #[error("b = 1/(p-1) is excluded: the covered-volume formula degenerates there")]
    BoundaryB,
    #[error("transition matrix is not stochastic: {0}")]
    NotStochastic(String),
    #[error("chain is not irreducible")]
    NotIrreducible,
    #[error("bad parameters: {0}")]
    BadParams(String),
}
