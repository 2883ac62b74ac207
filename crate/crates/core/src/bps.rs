//! Beacon period sets and channel sets.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::Error;

/// Divisibility family of a beacon period set.
///
/// `F3 ⊂ F2 ⊂ F1`: a divisibility chain is also a set whose members all
/// divide the maximum, and every set belongs to `F1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// Arbitrary periods.
    F1,
    /// Every period divides the largest one (`lcm == max`).
    F2,
    /// The periods form a divisibility chain.
    F3,
}

impl Family {
    /// `true` if `self` is the same family as `other` or a subfamily of it.
    pub fn is_within(self, other: Family) -> bool {
        self >= other
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::F1 => "F1",
            Family::F2 => "F2",
            Family::F3 => "F3",
        };
        f.write_str(s)
    }
}

/// Returns the most specific family containing `periods`.
pub fn classify_family(periods: &[u64]) -> Result<Family, Error> {
    if periods.is_empty() {
        return Err(Error::EmptyPeriodSet);
    }
    if periods.contains(&0) {
        return Err(Error::ZeroPeriod);
    }
    let mut sorted = periods.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.windows(2).all(|w| w[1] % w[0] == 0) {
        return Ok(Family::F3);
    }
    let max = *sorted.last().expect("nonempty");
    if sorted.iter().all(|b| max.is_multiple_of(*b)) {
        Ok(Family::F2)
    } else {
        Ok(Family::F1)
    }
}

/// A set of beacon periods, in time slots, with cached GCD, LCM and family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BeaconPeriodSet {
    periods: Vec<u64>,
    gcd: u64,
    lcm: u64,
    family: Family,
}

impl BeaconPeriodSet {
    /// Builds a period set. Input order does not matter; duplicates are merged.
    pub fn new(periods: impl IntoIterator<Item = u64>) -> Result<Self, Error> {
        let mut periods: Vec<u64> = periods.into_iter().collect();
        let family = classify_family(&periods)?;
        periods.sort_unstable();
        periods.dedup();
        let gcd = periods.iter().copied().reduce(|a, b| a.gcd(&b)).expect("nonempty");
        let mut lcm: u64 = 1;
        for &b in &periods {
            lcm = lcm.checked_div(lcm.gcd(&b)).and_then(|l| l.checked_mul(b)).ok_or(Error::LcmOverflow)?;
        }
        Ok(Self { periods, gcd, lcm, family })
    }

    /// Periods in strictly increasing order.
    pub fn periods(&self) -> &[u64] {
        &self.periods
    }

    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    pub fn gcd(&self) -> u64 {
        self.gcd
    }

    pub fn lcm(&self) -> u64 {
        self.lcm
    }

    pub fn max(&self) -> u64 {
        *self.periods.last().expect("nonempty by construction")
    }

    pub fn min(&self) -> u64 {
        self.periods[0]
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn contains(&self, period: u64) -> bool {
        self.periods.binary_search(&period).is_ok()
    }

    /// Index of `period` in [`periods`](Self::periods).
    pub fn index_of(&self, period: u64) -> Option<usize> {
        self.periods.binary_search(&period).ok()
    }

    /// Total number of offsets over all periods, `Σ b`.
    pub fn offset_count(&self) -> u64 {
        self.periods.iter().sum()
    }

    /// Divides every period by the set's GCD. The family is preserved.
    pub fn normalize(&self) -> BeaconPeriodSet {
        let g = self.gcd;
        BeaconPeriodSet {
            periods: self.periods.iter().map(|b| b / g).collect(),
            gcd: 1,
            lcm: self.lcm / g,
            family: self.family,
        }
    }
}

impl fmt::Display for BeaconPeriodSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, b) in self.periods.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for BeaconPeriodSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.periods.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BeaconPeriodSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let periods = Vec::<u64>::deserialize(d)?;
        BeaconPeriodSet::new(periods).map_err(serde::de::Error::custom)
    }
}

/// Free-function form of [`BeaconPeriodSet::normalize`].
pub fn normalize_bp_set(bps: &BeaconPeriodSet) -> BeaconPeriodSet {
    bps.normalize()
}

/// The channels `0..count`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct ChannelSet {
    count: usize,
}

impl ChannelSet {
    pub fn new(count: usize) -> Result<Self, Error> {
        if count == 0 {
            return Err(Error::NoChannels);
        }
        Ok(Self { count })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn iter(&self) -> std::ops::Range<usize> {
        0..self.count
    }
}

impl TryFrom<usize> for ChannelSet {
    type Error = Error;

    fn try_from(count: usize) -> Result<Self, Error> {
        ChannelSet::new(count)
    }
}

impl From<ChannelSet> for usize {
    fn from(c: ChannelSet) -> usize {
        c.count
    }
}
