//! Exact positive rational edge labels.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedSub};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A strictly positive rational distance, always kept in lowest terms.
///
/// Equality and hashing are structural; `Ratio` normalises on construction so
/// `2/4` and `1/2` are the same value.
#[derive(Clone, Copy)]
pub struct Label(Ratio<i64>);

impl PartialEq for Label {
    fn eq(&self, other: &Self) -> bool {
        self.0.numer() == other.0.numer() && self.0.denom() == other.0.denom()
    }
}

impl Eq for Label {}

impl std::hash::Hash for Label {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.0.numer(), self.0.denom()).hash(state);
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self.0.denom() == other.0.denom() {
            self.0.numer().cmp(other.0.numer())
        } else {
            self.0.cmp(&other.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("empty label")]
    Empty,
    #[error("invalid integer in label {0:?}")]
    InvalidInteger(String),
    #[error("zero denominator in label {0:?}")]
    ZeroDenominator(String),
    #[error("label {0:?} is not positive")]
    NotPositive(String),
    #[error("label {0:?} is not in lowest terms")]
    NotReduced(String),
}

impl Label {
    pub const ONE: Label = Label(Ratio::new_raw(1, 1));

    /// Builds `numer / denom`, rejecting zero denominators and non-positive values.
    pub fn new(numer: i64, denom: i64) -> Result<Self, LabelError> {
        if denom == 0 {
            return Err(LabelError::ZeroDenominator(format!("{numer}/{denom}")));
        }
        let r = Ratio::new(numer, denom);
        if *r.numer() <= 0 {
            return Err(LabelError::NotPositive(format!("{numer}/{denom}")));
        }
        Ok(Label(r))
    }

    /// Integer label. Panics if `n <= 0`.
    pub fn integer(n: i64) -> Self {
        assert!(n > 0, "label must be positive, got {n}");
        Label(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn checked_add(&self, other: &Label) -> Option<Label> {
        self.0.checked_add(&other.0).map(Label)
    }

    /// `self - other` if the result is still positive.
    pub fn checked_sub(&self, other: &Label) -> Option<Label> {
        let d = self.0.checked_sub(&other.0)?;
        (*d.numer() > 0).then_some(Label(d))
    }

    /// `floor(self / other)`.
    pub fn floor_div(&self, other: &Label) -> u64 {
        // (a/b) / (c/d) = (a*d) / (b*c), all positive.
        let num = i128::from(self.numer()) * i128::from(other.denom());
        let den = i128::from(self.denom()) * i128::from(other.numer());
        (num / den) as u64
    }

    /// Least common multiple of the denominators, or `None` on overflow.
    pub fn common_denominator<'a>(labels: impl IntoIterator<Item = &'a Label>) -> Option<i64> {
        let mut acc: i64 = 1;
        for l in labels {
            let g = acc.gcd(&l.denom());
            acc = (acc / g).checked_mul(l.denom())?;
        }
        Some(acc)
    }

    /// The integer `self * denom`; `denom` must be a multiple of this label's denominator.
    pub fn scaled(&self, denom: i64) -> u128 {
        debug_assert_eq!(denom % self.denom(), 0);
        (self.numer() as u128) * ((denom / self.denom()) as u128)
    }

    /// Inverse of [`Label::scaled`].
    pub fn from_scaled(value: u128, denom: i64) -> Option<Label> {
        let v = i64::try_from(value).ok()?;
        Label::new(v, denom).ok()
    }

    /// Sum of a non-empty sequence of labels.
    pub fn sum<'a>(labels: impl IntoIterator<Item = &'a Label>) -> Option<Label> {
        let mut it = labels.into_iter();
        let mut acc = *it.next()?;
        for l in it {
            acc = acc.checked_add(l)?;
        }
        Some(acc)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Label({self})")
    }
}

impl FromStr for Label {
    type Err = LabelError;

    /// Parses `"p"` or `"p/q"`; the fraction must already be in lowest terms.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() {
            return Err(LabelError::Empty);
        }
        let parse = |part: &str| {
            part.trim()
                .parse::<i64>()
                .map_err(|_| LabelError::InvalidInteger(s.to_string()))
        };
        let (numer, denom) = match t.split_once('/') {
            Some((n, d)) => (parse(n)?, parse(d)?),
            None => (parse(t)?, 1),
        };
        if denom == 0 {
            return Err(LabelError::ZeroDenominator(s.to_string()));
        }
        if numer <= 0 || denom < 0 {
            return Err(LabelError::NotPositive(s.to_string()));
        }
        if numer.gcd(&denom) != 1 {
            return Err(LabelError::NotReduced(s.to_string()));
        }
        Ok(Label(Ratio::new_raw(numer, denom)))
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
