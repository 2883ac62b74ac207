//! Listening schedules: at most one scanned channel per time slot.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::Error;

/// A listening schedule. Idle slots are simply absent from the scan map.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Schedule {
    scans: BTreeMap<u64, usize>,
    horizon: u64,
}

impl Schedule {
    pub fn new() -> Self {
        Self::default()
    }

    /// An empty schedule covering `horizon` slots.
    pub fn with_horizon(horizon: u64) -> Self {
        Self { scans: BTreeMap::new(), horizon }
    }

    /// Builds a schedule from `(slot, channel)` pairs. Fails on a slot listed twice.
    pub fn from_scans(scans: impl IntoIterator<Item = (u64, usize)>) -> Result<Self, Error> {
        let mut s = Schedule::new();
        for (slot, channel) in scans {
            if s.scans.contains_key(&slot) {
                return Err(Error::SlotConflict(slot));
            }
            s.scan(slot, channel);
        }
        Ok(s)
    }

    /// Scans `channel` at `slot`, replacing any previous scan there. The
    /// horizon grows to cover the slot.
    pub fn scan(&mut self, slot: u64, channel: usize) {
        self.scans.insert(slot, channel);
        self.horizon = self.horizon.max(slot + 1);
    }

    /// Removes the scan at `slot`, if any. The horizon is left unchanged.
    pub fn clear(&mut self, slot: u64) -> Option<usize> {
        self.scans.remove(&slot)
    }

    pub fn channel_at(&self, slot: u64) -> Option<usize> {
        self.scans.get(&slot).copied()
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// Extends (never shrinks) the covered horizon.
    pub fn extend_horizon(&mut self, horizon: u64) {
        self.horizon = self.horizon.max(horizon);
    }

    /// Scans in ascending slot order.
    pub fn scans(&self) -> impl Iterator<Item = (u64, usize)> + '_ {
        self.scans.iter().map(|(&t, &c)| (t, c))
    }

    pub fn len(&self) -> usize {
        self.scans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scans.is_empty()
    }

    /// Slots in `0..until` with no scan.
    pub fn idle_slots(&self, until: u64) -> Vec<u64> {
        (0..until).filter(|t| !self.scans.contains_key(t)).collect()
    }

    /// Slots on which the tuned channel differs from the previously scanned one.
    /// The very first scan is not a switch; idle slots keep the tuned channel.
    pub fn switch_slots(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut tuned: Option<usize> = None;
        for (t, c) in self.scans() {
            if tuned.is_some_and(|p| p != c) {
                out.push(t);
            }
            tuned = Some(c);
        }
        out
    }

    /// Largest channel index used, if any.
    pub fn max_channel(&self) -> Option<usize> {
        self.scans.values().copied().max()
    }
}

/// Number of channel changes between consecutive scans.
pub fn channel_switch_count(schedule: &Schedule) -> usize {
    schedule.switch_slots().len()
}

#[derive(Serialize, Deserialize)]
struct ScheduleRepr {
    horizon: u64,
    scans: Vec<(u64, usize)>,
}

impl Serialize for Schedule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ScheduleRepr { horizon: self.horizon, scans: self.scans().collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Schedule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ScheduleRepr::deserialize(d)?;
        let mut s = Schedule::from_scans(repr.scans).map_err(D::Error::custom)?;
        if s.horizon > repr.horizon {
            return Err(D::Error::custom(format!(
                "scan at slot {} lies beyond horizon {}",
                s.horizon - 1,
                repr.horizon
            )));
        }
        s.horizon = repr.horizon;
        Ok(s)
    }
}
