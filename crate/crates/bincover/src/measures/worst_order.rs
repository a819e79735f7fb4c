//! Worst-order values: the fewest bins an algorithm covers over all
//! reorderings of a multiset.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::MeasureError;
use crate::algo::{Algorithm, OnlineState};
use crate::item::{rat_ceil, ItemSize, Rat, Sequence};
use crate::rng::stream_rng;

pub const DEFAULT_ARRANGEMENT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorstOrderMode {
    /// Enumerate every distinct ordering; fails beyond `budget` of them.
    Exact { budget: u64 },
    /// Minimum over `samples` random orderings: an upper bound only.
    Sampled { samples: u64, seed: u64 },
}

impl WorstOrderMode {
    pub fn exact() -> Self {
        WorstOrderMode::Exact { budget: DEFAULT_ARRANGEMENT_BUDGET }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorstOrderValue {
    /// The true minimum over all orderings.
    Exact { covered: u64 },
    /// The minimum over sampled orderings. The true worst-order value
    /// may be lower; never report this as the worst-order value itself.
    SampledUpperBound { covered: u64, samples: u64, seed: u64 },
}

impl WorstOrderValue {
    pub fn covered(&self) -> u64 {
        match *self {
            WorstOrderValue::Exact { covered } => covered,
            WorstOrderValue::SampledUpperBound { covered, .. } => covered,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, WorstOrderValue::Exact { .. })
    }
}

pub(super) fn distinct_with_counts(seq: &Sequence) -> (Vec<ItemSize>, Vec<u32>) {
    let mut sorted = seq.sorted_desc();
    sorted.reverse();
    let mut kinds: Vec<ItemSize> = Vec::new();
    let mut counts: Vec<u32> = Vec::new();
    for item in sorted {
        if kinds.last() == Some(&item) {
            *counts.last_mut().unwrap() += 1;
        } else {
            kinds.push(item);
            counts.push(1);
        }
    }
    (kinds, counts)
}

/// Number of distinct orderings of the multiset: n! / prod(c_i!).
pub(super) fn arrangement_count(counts: &[u32]) -> BigInt {
    let n: u32 = counts.iter().sum();
    let mut value = BigInt::one();
    let mut next = 1u32;
    for &c in counts {
        // Multiply a block of (next..next+c) and divide by c! as we go:
        // value stays integral because it is a running binomial product.
        for i in 1..=c {
            value = value * BigInt::from(next) / BigInt::from(i);
            next += 1;
        }
    }
    debug_assert_eq!(next, n + 1);
    value
}

struct Searcher {
    kinds: Vec<ItemSize>,
    memo: HashMap<(Vec<u32>, crate::algo::AlgoState), u64>,
}

impl Searcher {
    /// Minimum closures over all orderings of the remaining counts,
    /// starting from `state`. Identical residual multisets in identical
    /// states collapse, which is what makes repetitive multisets of a
    /// dozen items feasible.
    fn min_closures(&mut self, counts: &mut Vec<u32>, state: &crate::algo::AlgoState) -> u64 {
        if counts.iter().all(|&c| c == 0) {
            return 0;
        }
        let key = (counts.clone(), state.clone());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let mut best = u64::MAX;
        for i in 0..counts.len() {
            if counts[i] == 0 {
                continue;
            }
            counts[i] -= 1;
            let item = self.kinds[i].clone();
            let (next, closed) = state.place(&item);
            let value = closed as u64 + self.min_closures(counts, &next);
            counts[i] += 1;
            best = best.min(value);
        }
        self.memo.insert(key, best);
        best
    }
}

fn covered_in_order(alg: &Algorithm, items: &[ItemSize], order: &[usize]) -> u64 {
    let mut state = alg.initial_state();
    let mut covered = 0u64;
    for &i in order {
        let (next, closed) = state.place(&items[i]);
        state = next;
        covered += closed as u64;
    }
    covered
}

/// min over orderings sigma of alg(sigma(I)), exactly or sampled.
pub fn worst_order_value(
    alg: &Algorithm,
    seq: &Sequence,
    mode: &WorstOrderMode,
) -> Result<WorstOrderValue, MeasureError> {
    match *mode {
        WorstOrderMode::Exact { budget } => {
            let (kinds, mut counts) = distinct_with_counts(seq);
            let total = arrangement_count(&counts);
            if total > BigInt::from(budget) {
                return Err(MeasureError::BudgetExceeded {
                    arrangements: total.to_string(),
                    budget,
                });
            }
            let mut searcher = Searcher { kinds, memo: HashMap::new() };
            let covered = searcher.min_closures(&mut counts, &alg.initial_state());
            Ok(WorstOrderValue::Exact { covered })
        }
        WorstOrderMode::Sampled { samples, seed } => {
            if samples == 0 {
                return Err(MeasureError::BadParams("samples must be >= 1".into()));
            }
            let base: Vec<usize> = (0..seq.len()).collect();
            let covered = (0..samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = stream_rng(seed, i);
                    let mut order = base.clone();
                    order.shuffle(&mut rng);
                    covered_in_order(alg, &seq.items, &order)
                })
                .min()
                .unwrap_or(0);
            Ok(WorstOrderValue::SampledUpperBound { covered, samples, seed })
        }
    }
}

/// A certified bracket on DNF's worst-order value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DnfWorstOrderBounds {
    /// No ordering can cover fewer bins than this.
    pub lower: u64,
    /// What DNF covers on the sequence as given: an upper bound on the
    /// worst-order value. When it equals `lower`, the worst-order value
    /// is pinned exactly without any enumeration.
    pub given_order: u64,
}

impl DnfWorstOrderBounds {
    pub fn exact_value(&self) -> Option<u64> {
        (self.lower == self.given_order).then_some(self.lower)
    }
}

/// Volume argument: in any DNF run, a bin closes with content below
/// 1 + (last item), and the content just before closing is a subset sum
/// below 1. With w = (largest subset sum below 1) and m = (largest
/// item), every closed bin holds less than w + m and the final open bin
/// at most w, so covered >= (volume - w) / (w + m).
pub fn dnf_worst_order_bounds(seq: &Sequence) -> DnfWorstOrderBounds {
    let given_order = crate::algo::dnf_run(seq).covered();
    let vol = seq.volume();
    if seq.is_empty() || vol < Rat::one() {
        return DnfWorstOrderBounds { lower: 0, given_order };
    }
    let max_item = seq
        .items
        .iter()
        .max()
        .expect("nonempty")
        .value()
        .clone();
    let w = max_subset_sum_below_one(seq).unwrap_or_else(|| {
        // Subset-sum table too large: fall back to the trivial cap w < 1.
        // The bound stays valid with w replaced by 1 because all the
        // inequalities above are strict in that case.
        Rat::one()
    });
    let lower = rat_ceil(&((&vol - &w) / (&w + &max_item)))
        .to_u64()
        .unwrap_or(0);
    DnfWorstOrderBounds { lower, given_order }
}

/// Largest subset sum strictly below 1, by reachability over the common
/// denominator. Returns None when the table would be too large.
fn max_subset_sum_below_one(seq: &Sequence) -> Option<Rat> {
    const MAX_DENOMINATOR: u64 = 1 << 20;
    const MAX_WORK: u64 = 1 << 30;
    let mut denom = BigInt::one();
    for item in &seq.items {
        denom = num_integer::lcm(denom, item.value().denom().clone());
        if denom > BigInt::from(MAX_DENOMINATOR) {
            return None;
        }
    }
    let d = denom.to_u64()?;
    if d.checked_mul(seq.len() as u64)? > MAX_WORK {
        return None;
    }
    // reachable[v] = some sub-multiset sums to v/d, for v in 0..d.
    let mut reachable = vec![false; d as usize];
    reachable[0] = true;
    for item in &seq.items {
        let num = item.value().numer().to_u64()?;
        let item_den = item.value().denom().to_u64()?;
        let w = (num * (d / item_den)) as usize;
        for v in (0..d as usize - w).rev() {
            if reachable[v] {
                reachable[v + w] = true;
            }
        }
    }
    let best = (0..d as usize).rev().find(|&v| reachable[v])?;
    Some(Rat::new(BigInt::from(best), BigInt::from(d)))
}
