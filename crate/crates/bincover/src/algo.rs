//! The two online covering algorithms: Dual Next-Fit and Dual Harmonic.
//!
//! Dual Next-Fit (DNF) keeps a single open bin, places every item there,
//! and closes the bin as soon as its content reaches total size 1.
//!
//! Dual Harmonic (DH_k) splits (0,1) into k classes
//! (0, 1/k), [1/k, 1/(k-1)), ..., [1/2, 1) and runs one open bin per
//! class. A class [1/j, 1/(j-1)) closes its bin after exactly j items;
//! the leftover class (0, 1/k) is packed Next-Fit style. Class borders
//! 1/j belong to the class in which they are the smallest element, so an
//! item of size exactly 1/2 joins [1/2, 1). With k = 1 the only class is
//! (0, 1), which makes DH_1 identical to DNF.

use std::hash::Hash;

use num_bigint::BigInt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::item::{ItemSize, Rat, Sequence};
use crate::packing::{Bin, BinStatus, Packing, PackingTrace, TraceAction, TraceEvent};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgoError {
    #[error("k must be >= 1")]
    BadK,
}

/// Class index for DH_k: `1` is the Next-Fit class (0, 1/k); an index
/// j in 2..=k is the class [1/j, 1/(j-1)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntervalIndex(pub u32);

/// Maps an item to its DH_k class. Exact: an item of size exactly 1/j
/// lands in [1/j, 1/(j-1)).
pub fn harmonic_interval(item: &ItemSize, k: u32) -> IntervalIndex {
    debug_assert!(k >= 1);
    // Smallest j with 1/j <= item, i.e. j = ceil(1/item).
    let inv = item.value().recip();
    let j = inv.ceil().to_integer();
    if j > BigInt::from(k) {
        IntervalIndex(1)
    } else {
        let (_, digits) = j.to_u32_digits();
        IntervalIndex(digits.first().copied().unwrap_or(0))
    }
}

impl IntervalIndex {
    /// Half-open bounds of the class under a given k: (lo, hi) with the
    /// class being (lo, hi) for the Next-Fit class and [lo, hi) otherwise.
    pub fn bounds(&self, k: u32) -> (Rat, Rat) {
        let one = Rat::one();
        if self.0 == 1 {
            (Rat::zero(), &one / Rat::from_integer(BigInt::from(k)))
        } else {
            (
                &one / Rat::from_integer(BigInt::from(self.0)),
                &one / Rat::from_integer(BigInt::from(self.0 - 1)),
            )
        }
    }
}

/// Algorithm selector shared by evaluators, experiments, and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Dnf,
    Dhk { k: u32 },
}

impl Algorithm {
    pub fn dhk(k: u32) -> Result<Self, AlgoError> {
        if k < 1 {
            return Err(AlgoError::BadK);
        }
        Ok(Algorithm::Dhk { k })
    }

    /// Upper bound on simultaneously open bins (1 for DNF, k for DH_k).
    pub fn max_open(&self) -> usize {
        match self {
            Algorithm::Dnf => 1,
            Algorithm::Dhk { k } => *k as usize,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Algorithm::Dnf => "dnf".to_string(),
            Algorithm::Dhk { k } => format!("dh{k}"),
        }
    }

    pub fn run(&self, seq: &Sequence) -> AlgoRun {
        match self {
            Algorithm::Dnf => dnf_run(seq),
            Algorithm::Dhk { k } => dhk_run(seq, *k).expect("validated k"),
        }
    }

    pub fn initial_state(&self) -> AlgoState {
        match self {
            Algorithm::Dnf => AlgoState::Dnf(DnfState::new()),
            Algorithm::Dhk { k } => AlgoState::Dhk(DhkState::new(*k)),
        }
    }
}

/// Result of one online run: the event trace plus the final packing
/// (closed bins first come first, open bins still holding items last).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgoRun {
    pub packing: Packing,
    pub trace: PackingTrace,
}

impl AlgoRun {
    pub fn covered(&self) -> u64 {
        self.trace.covered
    }
}

/// Shared engine: a placement policy assigns each item to a slot; the
/// engine keeps one open bin per slot and closes it the moment it is
/// covered.
fn run_slotted(seq: &Sequence, slots: usize, mut slot_of: impl FnMut(&ItemSize) -> usize) -> AlgoRun {
    let mut events = Vec::with_capacity(seq.len() * 2);
    let mut bins: Vec<Bin> = Vec::new();
    let mut sums: Vec<Rat> = Vec::new();
    let mut open: Vec<Option<usize>> = vec![None; slots];
    let mut covered = 0u64;
    let one = Rat::one();

    for (i, item) in seq.items.iter().enumerate() {
        let slot = slot_of(item);
        let bin = match open[slot] {
            Some(b) => b,
            None => {
                let b = bins.len();
                bins.push(Bin { items: Vec::new(), status: BinStatus::Open });
                sums.push(Rat::zero());
                open[slot] = Some(b);
                events.push(TraceEvent { item: i, bin: b, action: TraceAction::Open });
                b
            }
        };
        bins[bin].items.push(item.clone());
        sums[bin] += item.value();
        events.push(TraceEvent { item: i, bin, action: TraceAction::Place });
        if sums[bin] >= one {
            bins[bin].status = BinStatus::Closed;
            open[slot] = None;
            covered += 1;
            events.push(TraceEvent { item: i, bin, action: TraceAction::Close });
        }
    }
    // Drop bins that were never materialized (none: bins open lazily),
    // keep empty-free packing.
    AlgoRun {
        packing: Packing { bins },
        trace: PackingTrace { events, covered },
    }
}

/// Dual Next-Fit over exact rationals.
pub fn dnf_run(seq: &Sequence) -> AlgoRun {
    run_slotted(seq, 1, |_| 0)
}

/// Dual Harmonic over exact rationals. `k = 1` degenerates to DNF.
pub fn dhk_run(seq: &Sequence, k: u32) -> Result<AlgoRun, AlgoError> {
    if k < 1 {
        return Err(AlgoError::BadK);
    }
    Ok(run_slotted(seq, k as usize + 1, |item| {
        harmonic_interval(item, k).0 as usize
    }))
}

// ---------------------------------------------------------------------
// Incremental states: the minimum information determining future covered
// counts. Used by the worst-order evaluator to merge equivalent prefixes.
// ---------------------------------------------------------------------

/// State transition interface for online covering runs.
pub trait OnlineState: Clone + Eq + Hash {
    /// Places one item; returns the follow-up state and whether a bin
    /// closed on this item.
    fn place(&self, item: &ItemSize) -> (Self, bool);
    /// Upper bound on the total size currently held in open bins.
    fn open_volume_bound(&self) -> Rat;
}

/// DNF state: the content of the single open bin.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DnfState {
    pub open: Rat,
}

impl DnfState {
    pub fn new() -> Self {
        DnfState { open: Rat::zero() }
    }
}

impl Default for DnfState {
    fn default() -> Self {
        Self::new()
    }
}

impl OnlineState for DnfState {
    fn place(&self, item: &ItemSize) -> (Self, bool) {
        let sum = &self.open + item.value();
        if sum >= Rat::one() {
            (DnfState::new(), true)
        } else {
            (DnfState { open: sum }, false)
        }
    }

    fn open_volume_bound(&self) -> Rat {
        self.open.clone()
    }
}

/// DH_k state: item count of each bordered class's open bin (a class
/// [1/j, 1/(j-1)) closes after exactly j items, so the count determines
/// everything) plus the exact content of the Next-Fit class bin.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DhkState {
    pub k: u32,
    pub small_open: Rat,
    /// counts[j - 2] = items in the open bin of class j, for j in 2..=k.
    pub counts: Vec<u32>,
}

impl DhkState {
    pub fn new(k: u32) -> Self {
        assert!(k >= 1, "k must be >= 1");
        DhkState {
            k,
            small_open: Rat::zero(),
            counts: vec![0; k.saturating_sub(1) as usize],
        }
    }
}

impl OnlineState for DhkState {
    fn place(&self, item: &ItemSize) -> (Self, bool) {
        let j = harmonic_interval(item, self.k).0;
        let mut next = self.clone();
        if j == 1 {
            let sum = &self.small_open + item.value();
            if sum >= Rat::one() {
                next.small_open = Rat::zero();
                (next, true)
            } else {
                next.small_open = sum;
                (next, false)
            }
        } else {
            let idx = (j - 2) as usize;
            next.counts[idx] += 1;
            if next.counts[idx] == j {
                next.counts[idx] = 0;
                (next, true)
            } else {
                (next, false)
            }
        }
    }

    fn open_volume_bound(&self) -> Rat {
        // Each bordered class j holds counts[j-2] items below 1/(j-1).
        let mut total = self.small_open.clone();
        for (idx, &c) in self.counts.iter().enumerate() {
            let j = idx as u32 + 2;
            total += Rat::new(BigInt::from(c), BigInt::from(j - 1));
        }
        total
    }
}

/// Either algorithm's state behind one type, for generic evaluators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AlgoState {
    Dnf(DnfState),
    Dhk(DhkState),
}

impl OnlineState for AlgoState {
    fn place(&self, item: &ItemSize) -> (Self, bool) {
        match self {
            AlgoState::Dnf(s) => {
                let (n, c) = s.place(item);
                (AlgoState::Dnf(n), c)
            }
            AlgoState::Dhk(s) => {
                let (n, c) = s.place(item);
                (AlgoState::Dhk(n), c)
            }
        }
    }

    fn open_volume_bound(&self) -> Rat {
        match self {
            AlgoState::Dnf(s) => s.open_volume_bound(),
            AlgoState::Dhk(s) => s.open_volume_bound(),
        }
    }
}

// ---------------------------------------------------------------------
// Float path: counting-only engines for Monte Carlo sampling. Labeled
// approximate wherever results surface; sums use f64.
// ---------------------------------------------------------------------

/// DNF covered count over f64 items.
pub fn dnf_count_f64(items: &[f64]) -> u64 {
    let mut open = 0.0f64;
    let mut covered = 0u64;
    for &x in items {
        open += x;
        if open >= 1.0 {
            covered += 1;
            open = 0.0;
        }
    }
    covered
}

/// DH_k covered count over f64 items.
pub fn dhk_count_f64(items: &[f64], k: u32) -> Result<u64, AlgoError> {
    if k < 1 {
        return Err(AlgoError::BadK);
    }
    let mut small_open = 0.0f64;
    let mut counts = vec![0u32; k.saturating_sub(1) as usize];
    let mut covered = 0u64;
    for &x in items {
        debug_assert!(x > 0.0 && x < 1.0);
        let j = (1.0 / x).ceil() as u64;
        if j > k as u64 {
            small_open += x;
            if small_open >= 1.0 {
                covered += 1;
                small_open = 0.0;
            }
        } else {
            let idx = (j - 2) as usize;
            counts[idx] += 1;
            if counts[idx] as u64 == j {
                counts[idx] = 0;
                covered += 1;
            }
        }
    }
    Ok(covered)
}
