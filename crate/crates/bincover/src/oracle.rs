//! Offline optima: an exact branch-and-bound search, closed forms for
//! structured inputs, and machine-checked partition certificates.
//!
//! The exact search maximizes the number of disjoint item groups with sum
//! at least 1 (leftover items can always be dumped into an already
//! covered bin, so they never matter). Two safe reductions keep the tree
//! small: the largest unused item can be assumed to sit in the next
//! covered bin (swapping it into any covered bin keeps that bin covered),
//! and only minimal covered groups need enumerating (dropping surplus
//! items from a covered bin frees them for later bins).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::item::{ItemSize, Rat, Sequence};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("exact search exceeded the node budget ({budget} nodes)")]
    InstanceTooLarge { budget: u64 },
    #[error("certificate uses items the sequence does not contain")]
    NotSubMultiset,
}

#[derive(Debug, Clone, Copy)]
pub struct OptOptions {
    pub node_budget: u64,
}

impl Default for OptOptions {
    fn default() -> Self {
        OptOptions { node_budget: 10_000_000 }
    }
}

/// Exact maximum number of covered bins, by branch and bound.
pub fn opt_exact(seq: &Sequence, options: &OptOptions) -> Result<u64, OracleError> {
    let mut items: Vec<Rat> = seq.items.iter().map(|i| i.value().clone()).collect();
    items.sort_unstable_by(|a, b| b.cmp(a));
    let volume: Rat = items.iter().sum();
    let mut searcher = Searcher {
        items,
        used: Vec::new(),
        remaining: volume,
        best: 0,
        nodes: 0,
        budget: options.node_budget,
    };
    searcher.used = vec![false; searcher.items.len()];
    searcher.next_bin(0)?;
    Ok(searcher.best)
}

struct Searcher {
    items: Vec<Rat>,       // descending
    used: Vec<bool>,
    remaining: Rat,        // total size of unused items
    best: u64,
    nodes: u64,
    budget: u64,
}

impl Searcher {
    fn tick(&mut self) -> Result<(), OracleError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(OracleError::InstanceTooLarge { budget: self.budget });
        }
        Ok(())
    }

    /// Opens the next covered bin. It must contain the largest unused
    /// item; `covered` bins are already committed.
    fn next_bin(&mut self, covered: u64) -> Result<(), OracleError> {
        self.tick()?;
        if covered > self.best {
            self.best = covered;
        }
        // Each further bin needs >= 1 of unused size.
        let ceiling = covered + floor_u64(&self.remaining);
        if ceiling <= self.best {
            return Ok(());
        }
        let Some(anchor) = self.used.iter().position(|u| !u) else {
            return Ok(());
        };
        self.used[anchor] = true;
        self.remaining -= &self.items[anchor];
        let sum = self.items[anchor].clone();
        self.grow_bin(sum, anchor + 1, covered)?;
        self.used[anchor] = false;
        let a = self.items[anchor].clone();
        self.remaining += a;
        Ok(())
    }

    /// Adds items (indices >= `start`, descending sizes) until the bin is
    /// covered; stopping exactly at the tipping item enumerates exactly
    /// the minimal covered groups.
    fn grow_bin(&mut self, sum: Rat, start: usize, covered: u64) -> Result<(), OracleError> {
        self.tick()?;
        if sum >= Rat::one() {
            return self.next_bin(covered + 1);
        }
        // Even taking every unused item cannot cover this bin.
        if &sum + &self.remaining < Rat::one() {
            return Ok(());
        }
        let mut i = start;
        while i < self.items.len() {
            if self.used[i] {
                i += 1;
                continue;
            }
            self.used[i] = true;
            self.remaining -= &self.items[i];
            let next = &sum + &self.items[i];
            self.grow_bin(next, i + 1, covered)?;
            self.used[i] = false;
            let v = self.items[i].clone();
            self.remaining += &v;
            // Declining one copy of a value declines them all; equal
            // items are interchangeable.
            while i < self.items.len() && self.items[i] == v {
                i += 1;
            }
        }
        Ok(())
    }
}

fn floor_u64(r: &Rat) -> u64 {
    if r.is_negative() {
        return 0;
    }
    let f = r.floor().to_integer();
    let (_, digits) = f.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

/// Exact optimum for l items of size 1-eps and s items of size eps, for
/// any 0 < eps < 1/(l+s). Smalls alone never cover a bin; a large plus
/// anything does, so the optimum is a maximum pairing.
pub fn opt_two_size(l: u64, s: u64) -> u64 {
    if s <= l {
        (l + s) / 2
    } else {
        l
    }
}

/// floor(volume): no packing covers more bins than the total item size.
pub fn opt_volume_bound(seq: &Sequence) -> BigInt {
    let v = seq.volume();
    if v.is_negative() {
        BigInt::zero()
    } else {
        v.floor().to_integer()
    }
}

/// A claimed partition of (a sub-multiset of) a sequence into groups,
/// used as a machine-checked lower bound on the offline optimum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCertificate {
    pub groups: Vec<Vec<ItemSize>>,
    pub claimed: u64,
}

impl PartitionCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Checks the certificate's groups against the sequence multiset and
/// returns how many groups are covered (sum >= 1). The result is a sound
/// lower bound on `opt_exact` regardless of the `claimed` field.
pub fn verify_certificate(
    seq: &Sequence,
    cert: &PartitionCertificate,
) -> Result<u64, OracleError> {
    let available = seq.sorted_desc();
    let mut needed: Vec<ItemSize> = cert.groups.iter().flatten().cloned().collect();
    needed.sort_unstable_by(|a, b| b.cmp(a));
    // Sub-multiset test by merging the two sorted lists.
    let mut ai = 0;
    for item in &needed {
        loop {
            if ai >= available.len() {
                return Err(OracleError::NotSubMultiset);
            }
            if &available[ai] == item {
                ai += 1;
                break;
            }
            if available[ai] < *item {
                return Err(OracleError::NotSubMultiset);
            }
            ai += 1;
        }
    }
    Ok(cert
        .groups
        .iter()
        .filter(|g| crate::item::volume_of(g.iter()) >= Rat::one())
        .count() as u64)
}
