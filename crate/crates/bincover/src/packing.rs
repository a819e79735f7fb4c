//! Packings, run traces, and the reasonableness check.
//!
//! A packing is the offline view (which items share a bin); a trace is the
//! online view (the exact order of open/place/close events). Reasonable
//! online algorithms close a bin the moment its content reaches total size
//! 1, never close earlier, and keep at most a constant number of bins open.

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::item::{ItemSize, Rat, Sequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BinStatus {
    Open,
    Closed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bin {
    pub items: Vec<ItemSize>,
    pub status: BinStatus,
}

impl Bin {
    pub fn sum(&self) -> Rat {
        crate::item::volume_of(self.items.iter())
    }

    pub fn is_covered(&self) -> bool {
        self.sum() >= Rat::one()
    }
}

/// A complete assignment of items to bins.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Packing {
    pub bins: Vec<Bin>,
}

impl Packing {
    pub fn from_groups(groups: Vec<Vec<ItemSize>>, status: BinStatus) -> Self {
        Packing {
            bins: groups
                .into_iter()
                .map(|items| Bin { items, status })
                .collect(),
        }
    }

    /// Number of closed bins whose contents sum to at least 1.
    pub fn covered_count(&self) -> u64 {
        self.bins
            .iter()
            .filter(|b| b.status == BinStatus::Closed && b.is_covered())
            .count() as u64
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PackingError {
    #[error("packing items do not form the same multiset as the sequence")]
    MultisetMismatch,
}

/// Recomputes every bin sum exactly and returns the number of bins holding
/// at least total size 1, after checking that the packing uses exactly the
/// sequence's items.
pub fn verify_packing(seq: &Sequence, packing: &Packing) -> Result<u64, PackingError> {
    let mut from_seq = seq.sorted_desc();
    let mut from_packing: Vec<ItemSize> = packing
        .bins
        .iter()
        .flat_map(|b| b.items.iter().cloned())
        .collect();
    from_packing.sort_unstable_by(|a, b| b.cmp(a));
    if from_seq != from_packing {
        return Err(PackingError::MultisetMismatch);
    }
    from_seq.clear();
    Ok(packing.bins.iter().filter(|b| b.is_covered()).count() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceAction {
    Open,
    Place,
    Close,
}

/// One event of an online run. `item` is the index into the input
/// sequence of the item being handled when the event fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub item: usize,
    pub bin: usize,
    pub action: TraceAction,
}

/// Serialized run: the event list plus the final covered count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingTrace {
    pub events: Vec<TraceEvent>,
    pub covered: u64,
}

impl PackingTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("event {index}: bin {bin} opened twice")]
    ReopenedBin { index: usize, bin: usize },
    #[error("event {index}: bin {bin} is not open")]
    BinNotOpen { index: usize, bin: usize },
    #[error("event {index}: expected item {expected}, trace places item {got}")]
    ItemOutOfOrder { index: usize, expected: usize, got: usize },
    #[error("event {index}: item index {item} outside the sequence")]
    ItemOutOfRange { index: usize, item: usize },
    #[error("trace places {placed} items but the sequence has {expected}")]
    MissingItems { placed: usize, expected: usize },
    #[error("trace reports covered = {reported} but closes {actual} covered bins")]
    CoveredMismatch { reported: u64, actual: u64 },
}

/// Why a trace fails the reasonableness contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// A bin reached total size >= 1 and the very next event did not
    /// close it (or the trace ended with it still open).
    NotClosedImmediately { event: usize, bin: usize },
    /// A close fired while the bin still held less than total size 1.
    ClosedBelowOne { event: usize, bin: usize },
    /// More than `max_open` bins were open at once.
    TooManyOpen { event: usize, open: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReasonableVerdict {
    pub ok: bool,
    pub first_violation: Option<Violation>,
}

/// Replays a trace against its sequence and checks the reasonableness
/// contract: bins close exactly when covered, never before, and at most
/// `max_open` bins are open at any time. Structural defects (events that
/// cannot be replayed at all) are errors, not verdicts.
pub fn validate_reasonable(
    seq: &Sequence,
    trace: &PackingTrace,
    max_open: usize,
) -> Result<ReasonableVerdict, TraceError> {
    #[derive(Clone, Copy, PartialEq)]
    enum BinPhase {
        Unopened,
        Open,
        Closed,
    }
    let mut verdict = ReasonableVerdict { ok: true, first_violation: None };
    let flag = |v: Violation, verdict: &mut ReasonableVerdict| {
        if verdict.ok {
            verdict.ok = false;
            verdict.first_violation = Some(v);
        }
    };

    let n_bins = trace
        .events
        .iter()
        .map(|e| e.bin + 1)
        .max()
        .unwrap_or(0);
    let mut phase = vec![BinPhase::Unopened; n_bins];
    let mut sums: Vec<Rat> = vec![Rat::from_integer(0.into()); n_bins];
    let mut open_count = 0usize;
    let mut next_item = 0usize;
    // Bin that reached sum >= 1 on the previous event and must close now.
    let mut must_close: Option<usize> = None;
    let mut closures = 0u64;

    for (index, ev) in trace.events.iter().enumerate() {
        if let Some(bin) = must_close {
            if !(ev.action == TraceAction::Close && ev.bin == bin) {
                flag(Violation::NotClosedImmediately { event: index, bin }, &mut verdict);
            }
            must_close = None;
        }
        match ev.action {
            TraceAction::Open => {
                if phase[ev.bin] != BinPhase::Unopened {
                    return Err(TraceError::ReopenedBin { index, bin: ev.bin });
                }
                phase[ev.bin] = BinPhase::Open;
                open_count += 1;
                if open_count > max_open {
                    flag(
                        Violation::TooManyOpen { event: index, open: open_count },
                        &mut verdict,
                    );
                }
            }
            TraceAction::Place => {
                if phase[ev.bin] != BinPhase::Open {
                    return Err(TraceError::BinNotOpen { index, bin: ev.bin });
                }
                if ev.item >= seq.len() {
                    return Err(TraceError::ItemOutOfRange { index, item: ev.item });
                }
                if ev.item != next_item {
                    return Err(TraceError::ItemOutOfOrder {
                        index,
                        expected: next_item,
                        got: ev.item,
                    });
                }
                sums[ev.bin] += seq.items[ev.item].value();
                next_item += 1;
                if sums[ev.bin] >= Rat::one() {
                    must_close = Some(ev.bin);
                }
            }
            TraceAction::Close => {
                if phase[ev.bin] != BinPhase::Open {
                    return Err(TraceError::BinNotOpen { index, bin: ev.bin });
                }
                phase[ev.bin] = BinPhase::Closed;
                open_count -= 1;
                if sums[ev.bin] < Rat::one() {
                    flag(Violation::ClosedBelowOne { event: index, bin: ev.bin }, &mut verdict);
                } else {
                    closures += 1;
                }
            }
        }
    }
    if let Some(bin) = must_close {
        flag(
            Violation::NotClosedImmediately { event: trace.events.len(), bin },
            &mut verdict,
        );
    }
    if next_item != seq.len() {
        return Err(TraceError::MissingItems { placed: next_item, expected: seq.len() });
    }
    if closures != trace.covered {
        return Err(TraceError::CoveredMismatch { reported: trace.covered, actual: closures });
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::item::rat;

    fn item(num: i64, den: i64) -> ItemSize {
        ItemSize::from_ratio(num, den).unwrap()
    }

    #[test]
    fn verify_packing_counts_covered_bins() {
        let seq = Sequence::from_literals(&["1/2", "1/2"]).unwrap();
        let packing = Packing::from_groups(vec![vec![item(1, 2), item(1, 2)]], BinStatus::Closed);
        assert_eq!(verify_packing(&seq, &packing).unwrap(), 1);

        // Splitting the same items over two bins covers nothing.
        let split = Packing::from_groups(
            vec![vec![item(1, 2)], vec![item(1, 2)]],
            BinStatus::Open,
        );
        assert_eq!(verify_packing(&seq, &split).unwrap(), 0);
    }

    #[test]
    fn verify_packing_rejects_foreign_items() {
        let seq = Sequence::from_literals(&["1/2", "1/2"]).unwrap();
        let packing = Packing::from_groups(vec![vec![item(1, 2), item(1, 3)]], BinStatus::Closed);
        assert_eq!(verify_packing(&seq, &packing), Err(PackingError::MultisetMismatch));
    }

    #[test]
    fn verify_packing_is_exact_at_the_boundary() {
        // 1/3 + 1/3 + 1/3 is exactly 1 and must count as covered.
        let seq = Sequence::from_literals(&["1/3", "1/3", "1/3"]).unwrap();
        let packing = Packing::from_groups(
            vec![vec![item(1, 3), item(1, 3), item(1, 3)]],
            BinStatus::Closed,
        );
        assert_eq!(verify_packing(&seq, &packing).unwrap(), 1);
        assert_eq!(packing.bins[0].sum(), rat(1, 1));
    }

    fn ev(item: usize, bin: usize, action: TraceAction) -> TraceEvent {
        TraceEvent { item, bin, action }
    }

    #[test]
    fn reasonable_trace_passes() {
        use TraceAction::*;
        let seq = Sequence::from_literals(&["1/2", "1/2", "1/4"]).unwrap();
        let trace = PackingTrace {
            events: vec![
                ev(0, 0, Open),
                ev(0, 0, Place),
                ev(1, 0, Place),
                ev(1, 0, Close),
                ev(2, 1, Open),
                ev(2, 1, Place),
            ],
            covered: 1,
        };
        let verdict = validate_reasonable(&seq, &trace, 1).unwrap();
        assert!(verdict.ok);
    }

    #[test]
    fn early_close_is_flagged() {
        use TraceAction::*;
        let seq = Sequence::from_literals(&["3/4", "3/4"]).unwrap();
        let trace = PackingTrace {
            events: vec![
                ev(0, 0, Open),
                ev(0, 0, Place),
                ev(0, 0, Close), // closes at 3/4
                ev(1, 1, Open),
                ev(1, 1, Place),
            ],
            covered: 0,
        };
        let verdict = validate_reasonable(&seq, &trace, 1).unwrap();
        assert!(!verdict.ok);
        assert!(matches!(
            verdict.first_violation,
            Some(Violation::ClosedBelowOne { bin: 0, .. })
        ));
    }

    #[test]
    fn late_close_is_flagged() {
        use TraceAction::*;
        let seq = Sequence::from_literals(&["3/4", "3/4", "1/4"]).unwrap();
        // Bin 0 reaches 3/2 on item 1 but the algorithm keeps placing.
        let trace = PackingTrace {
            events: vec![
                ev(0, 0, Open),
                ev(0, 0, Place),
                ev(1, 0, Place),
                ev(2, 0, Place),
                ev(2, 0, Close),
            ],
            covered: 1,
        };
        let verdict = validate_reasonable(&seq, &trace, 1).unwrap();
        assert!(!verdict.ok);
        assert!(matches!(
            verdict.first_violation,
            Some(Violation::NotClosedImmediately { bin: 0, .. })
        ));
    }

    #[test]
    fn open_bin_budget_is_enforced() {
        use TraceAction::*;
        let seq = Sequence::from_literals(&["1/4", "1/4"]).unwrap();
        let trace = PackingTrace {
            events: vec![
                ev(0, 0, Open),
                ev(0, 0, Place),
                ev(1, 1, Open),
                ev(1, 1, Place),
            ],
            covered: 0,
        };
        assert!(validate_reasonable(&seq, &trace, 2).unwrap().ok);
        let verdict = validate_reasonable(&seq, &trace, 1).unwrap();
        assert!(matches!(
            verdict.first_violation,
            Some(Violation::TooManyOpen { open: 2, .. })
        ));
    }

    #[test]
    fn malformed_traces_are_errors_not_verdicts() {
        use TraceAction::*;
        let seq = Sequence::from_literals(&["1/2", "1/2"]).unwrap();
        let played_twice = PackingTrace {
            events: vec![
                ev(0, 0, Open),
                ev(0, 0, Place),
                ev(0, 0, Place),
            ],
            covered: 0,
        };
        assert!(matches!(
            validate_reasonable(&seq, &played_twice, 1),
            Err(TraceError::ItemOutOfOrder { .. })
        ));

        let unopened = PackingTrace {
            events: vec![ev(0, 3, Place)],
            covered: 0,
        };
        assert!(matches!(
            validate_reasonable(&seq, &unopened, 1),
            Err(TraceError::BinNotOpen { .. })
        ));

        let short = PackingTrace {
            events: vec![ev(0, 0, Open), ev(0, 0, Place)],
            covered: 0,
        };
        assert!(matches!(
            validate_reasonable(&seq, &short, 1),
            Err(TraceError::MissingItems { placed: 1, expected: 2 })
        ));
    }

    #[test]
    fn trace_json_schema_is_stable() {
        use TraceAction::*;
        let trace = PackingTrace {
            events: vec![ev(0, 0, Open), ev(0, 0, Place)],
            covered: 0,
        };
        let json = trace.to_json();
        assert_eq!(
            json,
            r#"{"events":[{"item":0,"bin":0,"action":"open"},{"item":0,"bin":0,"action":"place"}],"covered":0}"#
        );
        assert_eq!(PackingTrace::from_json(&json).unwrap(), trace);
    }
}
