//! Competitive-ratio tables for size-restricted intervals.
//!
//! On an interval with one border 1/p both ratios are tight: DNF closes
//! bins with p or p+1 items while the optimum always uses p, giving
//! p/(p+1); DHk additionally exploits that only every second bin can be
//! forced to overshoot, giving (p^2+1)/(p(p+1)). With two borders the
//! DNF values are upper bounds only, while the DHk values are again
//! tight; which formula applies depends on whether items large enough
//! to absorb an entire overshoot (size above (p+2)/(p(p+1))) exist.

use serde::Serialize;

use super::MeasureError;
use crate::interval::{BorderClass, IntervalSpec};
use crate::item::{rat, rat_to_f64, Rat, Sequence};

/// One row of the table: an algorithm's ratio on the interval, flagged
/// as the exact competitive ratio or as an upper bound only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableEntry {
    pub algorithm: String,
    #[serde(with = "crate::item::rat_serde")]
    pub ratio: Rat,
    pub ratio_f64: f64,
    /// True when matching lower and upper bounds pin the ratio.
    pub exact: bool,
}

impl TableEntry {
    fn new(algorithm: &str, ratio: Rat, exact: bool) -> Self {
        let ratio_f64 = rat_to_f64(&ratio);
        TableEntry { algorithm: algorithm.into(), ratio, ratio_f64, exact }
    }
}

/// Competitive ratios of both algorithms on one interval, plus the
/// comparison verdict. DHk strictly dominates DNF on every interval
/// with one or two borders.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompetitiveTable {
    pub interval: String,
    /// Number of borders inside the interval (1 or 2).
    pub borders: u8,
    /// Maximal border index: 1/p is the largest border inside.
    pub p: u64,
    pub dnf: TableEntry,
    pub dhk: TableEntry,
    pub verdict: String,
}

/// Evaluates the closed-form ratios for an interval with one or two
/// borders. Intervals with no border are rejected (both algorithms
/// cover every bin with the minimum item count there, ratio 1), as are
/// intervals with three or more borders (no closed form is known).
pub fn competitive_table(spec: &IntervalSpec) -> Result<CompetitiveTable, MeasureError> {
    let (borders, p) = match spec.classify() {
        BorderClass::NoBorder => return Err(MeasureError::NoBorder),
        BorderClass::ManyBorders { .. } => return Err(MeasureError::ManyBorders),
        BorderClass::OneBorder { p } => (1u8, p),
        BorderClass::TwoBorder { p } => (2u8, p),
    };
    let pi = p as i64;
    let (dnf_ratio, dnf_exact, dhk_ratio) = if borders == 1 {
        (
            rat(pi, pi + 1),
            true,
            rat(pi * pi + 1, pi * (pi + 1)),
        )
    } else {
        // Items above (p+2)/(p(p+1)) can pair with a minimal item to
        // cover a bin with p items; their availability decides which
        // adversarial structure binds.
        let threshold = rat(pi + 2, pi * (pi + 1));
        if spec.b() <= &threshold {
            (
                rat(pi + 1, pi + 2),
                false,
                rat(pi.pow(3) + 2 * pi * pi + pi + 2, pi * (pi + 1) * (pi + 2)),
            )
        } else {
            (
                rat(pi * pi + pi, pi * pi + 2 * pi + 2),
                false,
                rat(pi.pow(3) + 2 * pi * pi + 2, pi * (pi + 1) * (pi + 2)),
            )
        }
    };
    assert!(
        dhk_ratio > dnf_ratio,
        "DHk must dominate DNF on bordered intervals"
    );
    Ok(CompetitiveTable {
        interval: spec.label(),
        borders,
        p,
        dnf: TableEntry::new("dnf", dnf_ratio, dnf_exact),
        dhk: TableEntry::new("dhk", dhk_ratio, true),
        verdict: "dhk > dnf".into(),
    })
}

/// Item counts per size class relative to the interval's borders:
/// small in (a, 1/(p+1)), medium in [1/(p+1), 1/p), large in [1/p, b),
/// where 1/p is the largest border below b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SizeProfile {
    pub small: u64,
    pub medium: u64,
    pub large: u64,
}

pub fn size_profile(seq: &Sequence, spec: &IntervalSpec) -> Result<SizeProfile, MeasureError> {
    let p = spec.maximal_border_index() as i64;
    let upper = rat(1, p);
    let lower = rat(1, p + 1);
    let mut out = SizeProfile::default();
    for item in &seq.items {
        if !spec.contains_strict(item) {
            return Err(MeasureError::OutOfInterval {
                item: item.to_string(),
                interval: spec.label(),
            });
        }
        let v = item.value();
        if v < &lower {
            out.small += 1;
        } else if v < &upper {
            out.medium += 1;
        } else {
            out.large += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::gen_dhk_two_border;

    fn interval(an: i64, ad: i64, bn: i64, bd: i64) -> IntervalSpec {
        IntervalSpec::from_ratios((an, ad), (bn, bd)).unwrap()
    }

    #[test]
    fn one_border_rows_are_exact() {
        let table = competitive_table(&interval(1, 3, 2, 3)).unwrap();
        assert_eq!(table.borders, 1);
        assert_eq!(table.p, 2);
        assert_eq!(table.dnf.ratio, rat(2, 3));
        assert!(table.dnf.exact);
        assert_eq!(table.dhk.ratio, rat(5, 6));
        assert!(table.dhk.exact);
        assert_eq!(table.verdict, "dhk > dnf");

        let table = competitive_table(&interval(1, 4, 1, 2)).unwrap();
        assert_eq!(table.p, 3);
        assert_eq!(table.dnf.ratio, rat(3, 4));
        assert_eq!(table.dhk.ratio, rat(5, 6));
    }

    #[test]
    fn two_border_rows_switch_at_the_threshold() {
        // b = 2/3 is exactly the p = 2 threshold: the small-b branch.
        let table = competitive_table(&interval(1, 4, 2, 3)).unwrap();
        assert_eq!((table.borders, table.p), (2, 2));
        assert_eq!(table.dnf.ratio, rat(3, 4));
        assert!(!table.dnf.exact);
        assert_eq!(table.dhk.ratio, rat(5, 6));
        assert!(table.dhk.exact);

        // b above the threshold: overshoot-absorbing items exist.
        let table = competitive_table(&interval(1, 4, 1, 1)).unwrap();
        assert_eq!(table.dnf.ratio, rat(3, 5));
        assert!(!table.dnf.exact);
        assert_eq!(table.dhk.ratio, rat(3, 4));
        assert!(table.dhk.exact);
    }

    #[test]
    fn borderless_and_wide_intervals_are_rejected() {
        assert_eq!(
            competitive_table(&interval(2, 5, 1, 2)),
            Err(MeasureError::NoBorder)
        );
        assert_eq!(
            competitive_table(&IntervalSpec::unrestricted()),
            Err(MeasureError::ManyBorders)
        );
    }

    #[test]
    fn size_profiles_of_generated_families() {
        let fam = gen_dhk_two_border(2, 12, None).unwrap();
        let profile = size_profile(&fam.seq, &fam.interval).unwrap();
        assert_eq!(profile, SizeProfile { small: 12, medium: 0, large: 12 });

        let fam = gen_dhk_two_border(3, 60, None).unwrap();
        let profile = size_profile(&fam.seq, &fam.interval).unwrap();
        assert_eq!(profile, SizeProfile { small: 60, medium: 60, large: 60 });
        assert_eq!(
            profile.small + profile.medium + profile.large,
            fam.seq.len() as u64
        );

        let empty = size_profile(&Sequence::new(vec![]), &interval(1, 4, 1, 1)).unwrap();
        assert_eq!(empty, SizeProfile::default());
    }

    #[test]
    fn size_profile_rejects_out_of_interval_items() {
        let seq = Sequence::from_literals(&["1/2"]).unwrap();
        let err = size_profile(&seq, &interval(2, 5, 1, 2)).unwrap_err();
        assert!(matches!(err, MeasureError::OutOfInterval { .. }));
    }
}
