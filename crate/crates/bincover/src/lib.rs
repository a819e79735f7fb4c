//! A laboratory for online bin covering.
//!
//! Items with sizes in (0, 1) arrive one at a time; a bin is covered
//! once the sizes placed in it sum to at least 1, and the goal is to
//! cover as many bins as possible. This crate implements the two
//! classical online algorithms for the problem, Dual Next-Fit and the
//! Dual Harmonic family, together with the machinery needed to evaluate
//! them honestly:
//!
//! - exact engines and an exact offline optimum with partition
//!   certificates ([`algo`], [`oracle`]);
//! - generators for the adversarial families that witness the known
//!   performance bounds, each self-verifying its claims ([`families`]);
//! - evaluators for competitive ratio on size-restricted intervals,
//!   relative worst order, random order, and min/min measures
//!   ([`measures`]);
//! - closed-form expected ratios under uniform item sizes, computed to
//!   certified precision ([`analytic`]);
//! - reproducible Monte Carlo experiments ([`experiments`]).
//!
//! All deterministic analyses run on arbitrary-precision rationals, so
//! ties at exactly 1 are decided correctly, not at float mercy.

pub mod algo;
pub mod analytic;
pub mod experiments;
pub mod families;
pub mod interval;
pub mod item;
pub mod measures;
pub mod oracle;
pub mod packing;
pub mod rng;

pub use algo::{dhk_run, dnf_run, Algorithm};
pub use families::GeneratedFamily;
pub use interval::{BorderClass, IntervalSpec};
pub use item::{ItemSize, Rat, Sequence};
pub use oracle::{opt_exact, OptOptions, PartitionCertificate};
pub use packing::{Packing, PackingTrace};
