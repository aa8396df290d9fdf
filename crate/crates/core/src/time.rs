//! Discrete time domain extended with an infinity element.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A finite amount of time, in abstract ticks.
pub type Time = u64;

/// A time value or `INF`.
///
/// The derived ordering puts every finite value below `Inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TimeInf {
    Finite(Time),
    Inf,
}

pub use TimeInf::Inf as INF;

impl TimeInf {
    pub const ZERO: TimeInf = TimeInf::Finite(0);

    pub fn is_inf(self) -> bool {
        matches!(self, TimeInf::Inf)
    }

    pub fn finite(self) -> Option<Time> {
        match self {
            TimeInf::Finite(t) => Some(t),
            TimeInf::Inf => None,
        }
    }

    /// Saturating addition; `INF` is absorbing.
    pub fn plus(self, other: TimeInf) -> TimeInf {
        match (self, other) {
            (TimeInf::Finite(a), TimeInf::Finite(b)) => match a.checked_add(b) {
                Some(s) => TimeInf::Finite(s),
                None => TimeInf::Inf,
            },
            _ => TimeInf::Inf,
        }
    }

    /// Truncated subtraction of a finite amount. `INF monus t = INF`.
    pub fn monus(self, t: Time) -> TimeInf {
        match self {
            TimeInf::Finite(a) => TimeInf::Finite(a.saturating_sub(t)),
            TimeInf::Inf => TimeInf::Inf,
        }
    }

    pub fn min(self, other: TimeInf) -> TimeInf {
        std::cmp::min(self, other)
    }

    pub fn max(self, other: TimeInf) -> TimeInf {
        std::cmp::max(self, other)
    }
}

impl From<Time> for TimeInf {
    fn from(t: Time) -> Self {
        TimeInf::Finite(t)
    }
}

impl PartialEq<Time> for TimeInf {
    fn eq(&self, other: &Time) -> bool {
        *self == TimeInf::Finite(*other)
    }
}

impl PartialOrd<Time> for TimeInf {
    fn partial_cmp(&self, other: &Time) -> Option<Ordering> {
        Some(self.cmp(&TimeInf::Finite(*other)))
    }
}

impl fmt::Display for TimeInf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeInf::Finite(t) => write!(f, "{t}"),
            TimeInf::Inf => f.write_str("INF"),
        }
    }
}

impl Serialize for TimeInf {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            TimeInf::Finite(t) => s.serialize_u64(*t),
            TimeInf::Inf => s.serialize_str("INF"),
        }
    }
}

impl<'de> Deserialize<'de> for TimeInf {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(n) => Ok(TimeInf::Finite(n)),
            Repr::Str(s) if s == "INF" => Ok(TimeInf::Inf),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("expected INF, got {s:?}"))),
        }
    }
}

/// Free functions mirroring the method forms.
pub fn plus(a: TimeInf, b: TimeInf) -> TimeInf {
    a.plus(b)
}

pub fn monus(a: TimeInf, b: Time) -> TimeInf {
    a.monus(b)
}

pub fn min_t(a: TimeInf, b: TimeInf) -> TimeInf {
    a.min(b)
}

/// A closed interval `[lower, upper]`; the upper bound may be `INF`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    lower: Time,
    upper: TimeInf,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed interval [{lower}, {upper}]: lower bound exceeds upper bound")]
pub struct IntervalError {
    pub lower: Time,
    pub upper: TimeInf,
}

impl Interval {
    pub fn new(lower: Time, upper: TimeInf) -> Result<Self, IntervalError> {
        if TimeInf::Finite(lower) > upper {
            return Err(IntervalError { lower, upper });
        }
        Ok(Interval { lower, upper })
    }

    pub fn lower(&self) -> Time {
        self.lower
    }

    pub fn upper(&self) -> TimeInf {
        self.upper
    }

    pub fn contains(&self, t: Time) -> bool {
        self.lower <= t && TimeInf::Finite(t) <= self.upper
    }
}

pub fn in_interval(t: Time, iv: &Interval) -> bool {
    iv.contains(t)
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}
