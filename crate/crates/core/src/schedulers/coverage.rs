use crate::bps::{BeaconPeriodSet, ChannelSet};
use crate::discovery::ConfigSpace;

/// Tracks which configurations a partial schedule has already discovered and
/// evaluates the weighted gain of scanning a channel in a slot.
#[derive(Clone, Debug)]
pub(crate) struct Coverage {
    space: ConfigSpace,
    found: Vec<bool>,
    remaining: usize,
}

impl Coverage {
    pub(crate) fn new(bps: &BeaconPeriodSet, channels: ChannelSet) -> Self {
        let space = ConfigSpace::new(bps, channels);
        let found = vec![false; space.len()];
        let remaining = space.len();
        Self { space, found, remaining }
    }

    pub(crate) fn channels(&self) -> usize {
        self.space.channels()
    }

    pub(crate) fn is_complete(&self) -> bool {
        self.remaining == 0
    }

    /// Weighted number of undiscovered configurations on `channel` beaconing in `slot`.
    pub(crate) fn value(&self, channel: usize, slot: u64) -> u64 {
        (0..self.space.periods().len())
            .filter(|&k| !self.found[self.space.index_at_slot(channel, k, slot)])
            .map(|k| self.space.weight(k))
            .sum()
    }

    pub(crate) fn values(&self, slot: u64) -> Vec<u64> {
        (0..self.channels()).map(|c| self.value(c, slot)).collect()
    }

    pub(crate) fn apply(&mut self, channel: usize, slot: u64) {
        for k in 0..self.space.periods().len() {
            let i = self.space.index_at_slot(channel, k, slot);
            if !self.found[i] {
                self.found[i] = true;
                self.remaining -= 1;
            }
        }
    }
}
