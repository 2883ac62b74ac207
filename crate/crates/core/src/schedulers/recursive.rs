//! Matrix form of WDT-optimal schedules, PSV, and the inductive constructor of
//! recursive schedules for divisibility chains.

use crate::bps::{BeaconPeriodSet, ChannelSet, Family};
use crate::schedule::Schedule;
use crate::Error;

/// A complete WDT-optimal schedule for largest period `period` written as a
/// `|C| × period` matrix: `entries[c][δ] = k` means channel `c` is scanned in
/// slot `k·period + δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleMatrix {
    period: u64,
    entries: Vec<Vec<usize>>,
}

impl ScheduleMatrix {
    /// Validates that every entry is below the channel count and that no two
    /// channels share a slot.
    pub fn new(period: u64, entries: Vec<Vec<usize>>) -> Result<Self, Error> {
        let m = Self { period, entries };
        m.validate()?;
        Ok(m)
    }

    /// Channel `c` scanned during `[c·period, (c+1)·period)`.
    pub fn base(period: u64, channels: ChannelSet) -> Self {
        let entries = channels.iter().map(|c| vec![c; period as usize]).collect();
        Self { period, entries }
    }

    /// Reads the matrix of a complete WDT-optimal schedule.
    pub fn from_schedule(schedule: &Schedule, period: u64, channels: ChannelSet) -> Result<Self, Error> {
        let n = channels.count();
        let mut entries = vec![vec![usize::MAX; period as usize]; n];
        for (t, c) in schedule.scans() {
            if t >= period * n as u64 {
                continue;
            }
            if c >= n {
                return Err(Error::ChannelOutOfRange { channel: c, count: n });
            }
            let d = (t % period) as usize;
            if entries[c][d] == usize::MAX {
                entries[c][d] = (t / period) as usize;
            }
        }
        if entries.iter().flatten().any(|&e| e == usize::MAX) {
            return Err(Error::InvalidMatrix("schedule is not complete within max(B)·|C| slots".into()));
        }
        Self::new(period, entries)
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn channels(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<usize>] {
        &self.entries
    }

    pub fn get(&self, channel: usize, offset: u64) -> usize {
        self.entries[channel][offset as usize]
    }

    /// Absolute slot of cell `(channel, offset)`.
    pub fn slot(&self, channel: usize, offset: u64) -> u64 {
        self.get(channel, offset) as u64 * self.period + offset
    }

    pub fn to_schedule(&self) -> Schedule {
        let mut s = Schedule::with_horizon(self.period * self.channels() as u64);
        for c in 0..self.channels() {
            for d in 0..self.period {
                s.scan(self.slot(c, d), c);
            }
        }
        s
    }

    fn validate(&self) -> Result<(), Error> {
        let n = self.entries.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("no rows".into()));
        }
        for row in &self.entries {
            if row.len() as u64 != self.period {
                return Err(Error::InvalidMatrix(format!("row has {} columns, expected {}", row.len(), self.period)));
            }
            if let Some(&e) = row.iter().find(|&&e| e >= n) {
                return Err(Error::InvalidMatrix(format!("entry {e} is not below {n}")));
            }
        }
        for d in 0..self.period as usize {
            let mut seen = vec![false; n];
            for row in &self.entries {
                if std::mem::replace(&mut seen[row[d]], true) {
                    return Err(Error::InvalidMatrix(format!("column {d} repeats entry {}", row[d])));
                }
            }
        }
        Ok(())
    }
}

/// Re-expresses a schedule matrix for largest period `target`, a multiple of
/// the current one. Every scan `(c, k·b' + δ')` keeps its absolute slot: it
/// moves to column `(k·b' + δ') mod b''` with entry `(k·b' + δ') div b''`.
/// Cells left empty are filled, per column, with the unused entries in
/// ascending order.
pub fn extend_recursive(matrix: &ScheduleMatrix, target: u64) -> Result<ScheduleMatrix, Error> {
    matrix.validate()?;
    let period = matrix.period;
    if target == 0 || !target.is_multiple_of(period) {
        return Err(Error::NotMultiple { period, target });
    }
    let n = matrix.channels();
    let mut cells: Vec<Vec<Option<usize>>> = vec![vec![None; target as usize]; n];
    for (c, row) in cells.iter_mut().enumerate() {
        for d in 0..period {
            let slot = matrix.slot(c, d);
            let col = (slot % target) as usize;
            let entry = (slot / target) as usize;
            debug_assert!(row[col].is_none(), "mapping is injective within a row");
            row[col] = Some(entry);
        }
    }
    for col in 0..target as usize {
        let mut used = vec![false; n];
        for row in &cells {
            if let Some(e) = row[col] {
                used[e] = true;
            }
        }
        let mut free = (0..n).filter(|&e| !used[e]);
        for row in cells.iter_mut() {
            if row[col].is_none() {
                row[col] = free.next();
            }
        }
    }
    let entries = cells
        .into_iter()
        .map(|row| row.into_iter().map(|e| e.expect("every column has n distinct entries")).collect())
        .collect();
    ScheduleMatrix::new(target, entries)
}

/// Builds a recursive schedule for a divisibility chain by extending the
/// single-period base schedule one period at a time.
pub fn recursive_f3(bps: &BeaconPeriodSet, channels: ChannelSet) -> Result<Schedule, Error> {
    if bps.family() != Family::F3 {
        return Err(Error::NotDivisibilityChain(bps.to_string()));
    }
    let mut matrix = ScheduleMatrix::base(bps.min(), channels);
    for &b in &bps.periods()[1..] {
        matrix = extend_recursive(&matrix, b)?;
    }
    Ok(matrix.to_schedule())
}

/// Passive scan: channel `j` during `[j·max(B), (j+1)·max(B))`.
pub fn psv(bps: &BeaconPeriodSet, channels: ChannelSet) -> Schedule {
    ScheduleMatrix::base(bps.max(), channels).to_schedule()
}
