//! Monte Carlo estimation of expected covered counts under uniformly
//! random arrival order.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::worst_order::{arrangement_count, distinct_with_counts};
use super::MeasureError;
use crate::algo::{Algorithm, AlgoState, OnlineState};
use crate::item::{ItemSize, Rat, Sequence};
use crate::rng::stream_rng;

/// An empirical mean with a 95% normal-approximation interval built
/// from the sample standard deviation. The interval is approximate; a
/// zero-variance sample yields a width of exactly 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioEstimate {
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomOrderEstimate {
    /// Estimate of the expected covered count over random orders.
    pub covered: RatioEstimate,
    /// The same estimate divided by a caller-supplied optimum.
    pub ratio_to_opt: Option<RatioEstimate>,
}

fn estimate_from_counts(counts: &[u64], seed: u64) -> RatioEstimate {
    // Counts are integers, so the moments are exact and the result does
    // not depend on summation order or worker count.
    let n = counts.len() as u64;
    let sum: u128 = counts.iter().map(|&c| c as u128).sum();
    let sumsq: u128 = counts.iter().map(|&c| (c as u128) * (c as u128)).sum();
    let mean = sum as f64 / n as f64;
    let half = if n > 1 {
        let spread = n as u128 * sumsq - sum * sum;
        let variance = spread as f64 / (n as f64 * (n - 1) as f64);
        1.96 * (variance / n as f64).sqrt()
    } else {
        0.0
    };
    RatioEstimate {
        point: mean,
        ci_low: mean - half,
        ci_high: mean + half,
        samples: n,
        seed,
    }
}

/// Estimates E over random orders of alg(sigma(I)) from `samples`
/// seeded shuffles; each permutation is equiprobable (Fisher-Yates).
/// When `opt` is given, also reports the ratio estimate to it.
pub fn random_order_estimate(
    alg: &Algorithm,
    seq: &Sequence,
    samples: u64,
    seed: u64,
    opt: Option<u64>,
) -> Result<RandomOrderEstimate, MeasureError> {
    if samples < 100 {
        return Err(MeasureError::BadParams(format!(
            "need at least 100 samples for a meaningful interval, got {samples}"
        )));
    }
    if opt == Some(0) {
        return Err(MeasureError::BadParams("opt must be positive".into()));
    }
    let base: Vec<usize> = (0..seq.len()).collect();
    let counts: Vec<u64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let mut order = base.clone();
            order.shuffle(&mut rng);
            let mut state = alg.initial_state();
            let mut covered = 0u64;
            for &j in &order {
                let (next, closed) = state.place(&seq.items[j]);
                state = next;
                covered += closed as u64;
            }
            covered
        })
        .collect();
    let covered = estimate_from_counts(&counts, seed);
    let ratio_to_opt = opt.map(|o| {
        let o = o as f64;
        RatioEstimate {
            point: covered.point / o,
            ci_low: covered.ci_low / o,
            ci_high: covered.ci_high / o,
            samples,
            seed,
        }
    });
    Ok(RandomOrderEstimate { covered, ratio_to_opt })
}

/// Exact E[alg(sigma(I))]: distinct arrangements are equiprobable, so
/// condition on which kind arrives next (probability count/remaining)
/// and memoize on the residual multiset and algorithm state.
pub fn exhaustive_expected_covered(
    alg: &Algorithm,
    seq: &Sequence,
    budget: u64,
) -> Result<Rat, MeasureError> {
    let (kinds, mut counts) = distinct_with_counts(seq);
    let total = arrangement_count(&counts);
    if total > BigInt::from(budget) {
        return Err(MeasureError::BudgetExceeded {
            arrangements: total.to_string(),
            budget,
        });
    }
    let mut memo: HashMap<(Vec<u32>, AlgoState), Rat> = HashMap::new();
    fn go(
        kinds: &[ItemSize],
        counts: &mut Vec<u32>,
        state: &AlgoState,
        memo: &mut HashMap<(Vec<u32>, AlgoState), Rat>,
    ) -> Rat {
        let remaining: u32 = counts.iter().sum();
        if remaining == 0 {
            return Rat::zero();
        }
        let key = (counts.clone(), state.clone());
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        let mut acc = Rat::zero();
        for i in 0..counts.len() {
            if counts[i] == 0 {
                continue;
            }
            let weight = Rat::new(BigInt::from(counts[i]), BigInt::from(remaining));
            counts[i] -= 1;
            let (next, closed) = state.place(&kinds[i]);
            let sub = go(kinds, counts, &next, memo);
            counts[i] += 1;
            acc += weight * (Rat::from_integer(BigInt::from(closed as u8)) + sub);
        }
        memo.insert(key, acc.clone());
        acc
    }
    Ok(go(&kinds, &mut counts, &alg.initial_state(), &mut memo))
}
