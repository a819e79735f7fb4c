//! Size-restricted instances: open intervals (a, b) and their borders.
//!
//! A border is a point 1/l strictly inside (a, b). The largest one, 1/p,
//! drives every restricted-interval formula: items on each side of a
//! border behave differently under both algorithms. Intervals are
//! classified by how many borders they contain.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::item::{format_rat, ItemSize, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntervalError {
    #[error("interval bounds must satisfy 0 <= a < b <= 1, got ({a}, {b})")]
    BadBounds { a: String, b: String },
}

/// An open interval (a, b) within [0, 1] restricting item sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalSpec {
    a: Rat,
    b: Rat,
}

/// Border structure of an interval; `p` is the maximal border index, so
/// 1/p is the largest border inside (a, b).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BorderClass {
    /// No 1/l lies strictly inside (a, b).
    NoBorder,
    /// Exactly 1/p inside: 1/(p+1) <= a < 1/p.
    OneBorder { p: u64 },
    /// Exactly 1/p and 1/(p+1) inside: 1/(p+2) <= a < 1/(p+1).
    TwoBorder { p: u64 },
    /// Three or more borders inside.
    ManyBorders { p: u64 },
}

impl IntervalSpec {
    pub fn new(a: Rat, b: Rat) -> Result<Self, IntervalError> {
        if a < Rat::zero() || a >= b || b > Rat::one() {
            return Err(IntervalError::BadBounds {
                a: format_rat(&a),
                b: format_rat(&b),
            });
        }
        Ok(IntervalSpec { a, b })
    }

    pub fn from_ratios(a: (i64, i64), b: (i64, i64)) -> Result<Self, IntervalError> {
        Self::new(crate::item::rat(a.0, a.1), crate::item::rat(b.0, b.1))
    }

    /// The whole item domain (0, 1).
    pub fn unrestricted() -> Self {
        IntervalSpec { a: Rat::zero(), b: Rat::one() }
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    /// Index of the largest border strictly below b: the smallest integer
    /// p with 1/p < b. Always >= 2 because b <= 1.
    pub fn maximal_border_index(&self) -> u64 {
        let inv = self.b.recip();
        let p = inv.floor().to_integer() + BigInt::one();
        p.to_u64().expect("border index fits u64")
    }

    /// The largest border 1/p inside (a, b), when one exists.
    pub fn maximal_border(&self) -> Option<Rat> {
        let p = self.maximal_border_index();
        let border = Rat::new(BigInt::one(), BigInt::from(p));
        (border > self.a).then_some(border)
    }

    pub fn classify(&self) -> BorderClass {
        let p = self.maximal_border_index();
        let border = |l: u64| Rat::new(BigInt::one(), BigInt::from(l));
        if border(p) <= self.a {
            return BorderClass::NoBorder;
        }
        if self.a >= border(p + 1) {
            BorderClass::OneBorder { p }
        } else if self.a >= border(p + 2) {
            BorderClass::TwoBorder { p }
        } else {
            BorderClass::ManyBorders { p }
        }
    }

    /// Strict membership a < item < b.
    pub fn contains_strict(&self, item: &ItemSize) -> bool {
        item.value() > &self.a && item.value() < &self.b
    }

    pub fn label(&self) -> String {
        format!("({}, {})", format_rat(&self.a), format_rat(&self.b))
    }
}
