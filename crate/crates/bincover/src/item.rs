//! Item sizes, sequences, and the plain-text sequence file format.
//!
//! All deterministic analyses run on exact rationals so that borderline
//! sums (a bin reaching exactly 1) are decided correctly. Item sizes are
//! strictly between 0 and 1; a bin is covered once its contents sum to at
//! least 1.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational scalar used throughout the deterministic paths.
pub type Rat = BigRational;

/// Builds a rational from an integer numerator/denominator pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ItemError {
    #[error("item size must lie strictly between 0 and 1, got {0}")]
    OutOfRange(String),
    #[error("malformed item literal {literal:?}: {reason}")]
    Malformed { literal: String, reason: String },
    #[error("sequence file line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<ItemError>,
    },
    #[error("cannot read sequence file: {0}")]
    Io(String),
}

/// A single item size, invariant `0 < size < 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemSize(Rat);

impl ItemSize {
    pub fn new(value: Rat) -> Result<Self, ItemError> {
        if value <= Rat::zero() || value >= Rat::one() {
            return Err(ItemError::OutOfRange(format_rat(&value)));
        }
        Ok(ItemSize(value))
    }

    /// Convenience constructor from an integer fraction.
    pub fn from_ratio(num: i64, den: i64) -> Result<Self, ItemError> {
        if den == 0 {
            return Err(ItemError::Malformed {
                literal: format!("{num}/{den}"),
                reason: "zero denominator".into(),
            });
        }
        Self::new(rat(num, den))
    }

    pub fn value(&self) -> &Rat {
        &self.0
    }

    pub fn into_value(self) -> Rat {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.0)
    }
}

impl fmt::Display for ItemSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rat(&self.0))
    }
}

impl serde::Serialize for ItemSize {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for ItemSize {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for ItemSize {
    type Err = ItemError;

    /// Parses either an exact fraction `num/den` or a base-10 decimal
    /// literal such as `0.375`. Decimals are read exactly (no float
    /// round-trip): `0.1` becomes 1/10.
    fn from_str(s: &str) -> Result<Self, ItemError> {
        let raw = s.trim();
        let malformed = |reason: &str| ItemError::Malformed {
            literal: raw.to_string(),
            reason: reason.to_string(),
        };
        if raw.is_empty() {
            return Err(malformed("empty literal"));
        }
        if let Some((num, den)) = raw.split_once('/') {
            let num: BigInt = num
                .trim()
                .parse()
                .map_err(|_| malformed("numerator is not an integer"))?;
            let den: BigInt = den
                .trim()
                .parse()
                .map_err(|_| malformed("denominator is not an integer"))?;
            if den.is_zero() {
                return Err(malformed("zero denominator"));
            }
            return ItemSize::new(Rat::new(num, den));
        }
        // Decimal literal: [-]digits[.digits]
        let (neg, body) = match raw.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, raw),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(malformed("no digits"));
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(malformed("expected digits, a decimal point, or num/den"));
        }
        let digits = format!("{}{}", if int_part.is_empty() { "0" } else { int_part }, frac_part);
        let num: BigInt = digits.parse().map_err(|_| malformed("bad digits"))?;
        let num = if neg { -num } else { num };
        let den = BigInt::from(10u8).pow(frac_part.len() as u32);
        ItemSize::new(Rat::new(num, den))
    }
}

/// An ordered sequence of items, optionally labeled with its origin
/// (generator name and parameters).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    pub items: Vec<ItemSize>,
    pub provenance: Option<String>,
}

impl Sequence {
    pub fn new(items: Vec<ItemSize>) -> Self {
        Sequence { items, provenance: None }
    }

    pub fn with_provenance(items: Vec<ItemSize>, provenance: impl Into<String>) -> Self {
        Sequence { items, provenance: Some(provenance.into()) }
    }

    /// Parses item literals, one per slice entry.
    pub fn from_literals(literals: &[&str]) -> Result<Self, ItemError> {
        let items = literals
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Sequence::new(items))
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Exact total size of all items. Covered bins each need at least 1,
    /// so no packing covers more than `floor(volume)` bins.
    pub fn volume(&self) -> Rat {
        volume_of(self.items.iter())
    }

    /// Items sorted descending; the canonical multiset view.
    pub fn sorted_desc(&self) -> Vec<ItemSize> {
        let mut v = self.items.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// Renders the sequence file format: a version header, then one item
    /// per line as a reduced fraction.
    pub fn to_file_string(&self) -> String {
        let mut out = String::from("# bincover v1\n");
        if let Some(p) = &self.provenance {
            out.push_str(&format!("# {p}\n"));
        }
        for item in &self.items {
            out.push_str(&format!("{item}\n"));
        }
        out
    }

    /// Parses the sequence file format. The `# bincover v1` header is
    /// optional; blank lines and `#` comments are ignored.
    pub fn from_file_string(text: &str) -> Result<Self, ItemError> {
        let mut items = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let item = line.parse().map_err(|e| ItemError::AtLine {
                line: idx + 1,
                source: Box::new(e),
            })?;
            items.push(item);
        }
        Ok(Sequence::new(items))
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<(), ItemError> {
        fs::write(path, self.to_file_string()).map_err(|e| ItemError::Io(e.to_string()))
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self, ItemError> {
        let text = fs::read_to_string(path).map_err(|e| ItemError::Io(e.to_string()))?;
        Self::from_file_string(&text)
    }
}

/// Exact sum of item sizes.
pub fn volume_of<'a>(items: impl Iterator<Item = &'a ItemSize>) -> Rat {
    let mut total = Rat::zero();
    for item in items {
        total += item.value();
    }
    total
}

/// Renders a rational as `num/den`, or just `num` when the denominator
/// is one.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Converts a rational of any magnitude to the nearest f64 without the
/// numerator/denominator overflowing separately.
pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Rounds to `sig` significant decimal digits; reports print floats at a
/// fixed precision so identical inputs give byte-identical output.
pub fn round_sig(x: f64, sig: u32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let factor = 10f64.powi(sig as i32 - 1 - magnitude);
    (x * factor).round() / factor
}

/// Renders a float with `sig` significant digits in plain decimal form.
pub fn format_sig(x: f64, sig: u32) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - magnitude).max(0) as usize;
    format!("{:.*}", decimals, x)
}

/// Serde adapter rendering rationals as exact `num/den` strings; attach
/// with `#[serde(with = "crate::item::rat_serde")]`.
pub mod rat_serde {
    use std::str::FromStr;

    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rat, Rat};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let raw = String::deserialize(d)?;
        Rat::from_str(raw.trim()).map_err(serde::de::Error::custom)
    }
}

/// True division check helper: `floor` of a nonnegative rational.
pub fn rat_floor(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

/// Exact ceiling as a big integer.
pub fn rat_ceil(r: &Rat) -> BigInt {
    r.ceil().to_integer()
}
