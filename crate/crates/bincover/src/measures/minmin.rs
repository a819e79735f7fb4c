//! Min/min analysis on size-restricted intervals.
//!
//! The min/min value of an algorithm on an interval (a, b) compares its
//! guaranteed covering against the best guarantee any online algorithm
//! can achieve on the same instances. With at most one unit fraction
//! 1/p inside the interval, DHk degenerates to DNF-like behavior, so
//! the interesting quantity is DNF's shortfall against the best online
//! player, which is realized on streams mixing items just above 1/p
//! with items just below b.

use num_traits::One;
use serde::Serialize;

use super::MeasureError;
use crate::interval::{BorderClass, IntervalSpec};
use crate::item::{rat, rat_to_f64, Rat};

/// Outcome of a min/min computation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinMinReport {
    /// Exact ratio in (0, 1].
    #[serde(with = "crate::item::rat_serde")]
    pub ratio: Rat,
    /// Convenience float rendering of `ratio`.
    pub ratio_f64: f64,
    /// True when the interval contains no unit fraction, in which case
    /// every algorithm covers the same count and the ratio 1 carries no
    /// information about algorithm quality.
    pub no_border: bool,
    /// The single unit-fraction index when one exists.
    pub p: Option<u64>,
}

impl MinMinReport {
    fn exact(ratio: Rat, no_border: bool, p: Option<u64>) -> Self {
        let ratio_f64 = rat_to_f64(&ratio);
        MinMinReport { ratio, ratio_f64, no_border, p }
    }
}

/// Min/min ratio of DNF on an interval containing exactly one unit
/// fraction 1/p, i.e. 1/(p+1) <= a < 1/p < b <= 1/(p-1).
///
/// The adversary alternates two phases: a run of items slightly above
/// 1/p (where an optimist closes bins with p items but DNF may be
/// forced to spend p+1), then a run of items slightly below b. The
/// binding ratio is the larger of the two phase ratios
///   (1 + 1/p) / (1 + b)   and   p*b / (1 + b),
/// both of which degrade toward the competitive ratio as b moves.
///
/// Requires b < 1/(p-1) strictly; at b = 1/(p-1) the second unit
/// fraction enters the closure of the interval and the one-border
/// analysis breaks down.
pub fn minmin_ratio_dnf(spec: &IntervalSpec) -> Result<MinMinReport, MeasureError> {
    match spec.classify() {
        BorderClass::NoBorder => Ok(MinMinReport::exact(Rat::one(), true, None)),
        BorderClass::TwoBorder { .. } | BorderClass::ManyBorders { .. } => {
            Err(MeasureError::BadParams(
                "min/min analysis needs an interval with at most one unit fraction".into(),
            ))
        }
        BorderClass::OneBorder { p } => {
            if spec.b() == &rat(1, (p - 1).max(1) as i64) {
                return Err(MeasureError::BoundaryB);
            }
            let pr = rat(p as i64, 1);
            let one_plus_b = Rat::one() + spec.b();
            let overshoot = (Rat::one() + Rat::one() / &pr) / &one_plus_b;
            let streak = &pr * spec.b() / &one_plus_b;
            Ok(MinMinReport::exact(overshoot.max(streak), false, Some(p)))
        }
    }
}

/// Min/min ratio of DHk on the same one-border intervals: DHk closes
/// every bin with the minimum feasible number of items from the single
/// interval class, so it matches the best online guarantee exactly.
pub fn minmin_ratio_dhk(spec: &IntervalSpec) -> Result<MinMinReport, MeasureError> {
    match spec.classify() {
        BorderClass::NoBorder => Ok(MinMinReport::exact(Rat::one(), true, None)),
        BorderClass::TwoBorder { .. } | BorderClass::ManyBorders { .. } => {
            Err(MeasureError::BadParams(
                "min/min analysis needs an interval with at most one unit fraction".into(),
            ))
        }
        BorderClass::OneBorder { p } => {
            if spec.b() == &rat(1, (p - 1).max(1) as i64) {
                return Err(MeasureError::BoundaryB);
            }
            Ok(MinMinReport::exact(Rat::one(), false, Some(p)))
        }
    }
}

/// On the unrestricted interval (0, 1) the min/min measure cannot
/// separate the algorithms: both achieve ratio 1 because no online
/// algorithm has a positive guarantee against the worst stream.
pub fn minmin_unrestricted() -> (MinMinReport, MinMinReport) {
    let report = MinMinReport::exact(Rat::one(), true, None);
    (report.clone(), report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::IntervalSpec;

    fn interval(an: i64, ad: i64, bn: i64, bd: i64) -> IntervalSpec {
        IntervalSpec::from_ratios((an, ad), (bn, bd)).unwrap()
    }

    #[test]
    fn reference_one_border_value() {
        // (1/3, 3/5) around 1/2: max(3/2 / (8/5), 6/5 / (8/5)) = 15/16.
        let report = minmin_ratio_dnf(&interval(1, 3, 3, 5)).unwrap();
        assert_eq!(report.ratio, rat(15, 16));
        assert_eq!(report.p, Some(2));
        assert!(!report.no_border);
        // The streak term wins once b > (p+1)/p^2 = 3/4... check a b
        // below the crossover where the overshoot term dominates.
        let low_b = minmin_ratio_dnf(&interval(1, 3, 26, 50)).unwrap();
        assert_eq!(low_b.ratio, (rat(3, 2)) / (rat(1, 1) + rat(26, 50)));
    }

    #[test]
    fn dhk_and_borderless_cases_are_uninformative() {
        let dhk = minmin_ratio_dhk(&interval(1, 3, 3, 5)).unwrap();
        assert_eq!(dhk.ratio, rat(1, 1));
        assert!(!dhk.no_border);

        let flat = minmin_ratio_dnf(&interval(2, 5, 49, 100)).unwrap();
        assert_eq!(flat.ratio, rat(1, 1));
        assert!(flat.no_border);

        let (dnf_all, dhk_all) = minmin_unrestricted();
        assert_eq!(dnf_all.ratio, rat(1, 1));
        assert_eq!(dhk_all, dnf_all);
        assert!(dnf_all.no_border);
    }

    #[test]
    fn boundary_and_multi_border_intervals_are_rejected() {
        // b exactly at 1/(p-1): the analysis needs b strictly inside.
        assert_eq!(
            minmin_ratio_dnf(&interval(1, 3, 1, 1)),
            Err(MeasureError::BoundaryB)
        );
        assert_eq!(
            minmin_ratio_dnf(&interval(1, 4, 1, 2)),
            Err(MeasureError::BoundaryB)
        );
        assert_eq!(
            minmin_ratio_dhk(&interval(1, 3, 1, 1)),
            Err(MeasureError::BoundaryB)
        );
        assert!(matches!(
            minmin_ratio_dnf(&interval(1, 5, 1, 2)),
            Err(MeasureError::BadParams(_))
        ));
    }
}
