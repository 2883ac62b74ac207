//! OPT_B2: recursive schedules for two-period sets.

use super::coverage::Coverage;
use crate::bps::{BeaconPeriodSet, ChannelSet};
use crate::discovery::ConfigSpace;
use crate::schedule::Schedule;
use crate::Error;

/// Builds a recursive schedule for a set with exactly two periods.
///
/// Depth-first search over the first `max(B)·|C|` slots, channels tried in
/// ascending order. In a recursive schedule every slot `t < b·|C|` must
/// discover a fresh period-`b` configuration (there are `b·|C|` of them and at
/// most one per slot), so a channel is admissible at `t` only if its
/// `(c, b, t mod b)` configuration is still undiscovered for every `b` whose
/// deadline `b·|C|` lies beyond `t`.
pub fn opt_b2(bps: &BeaconPeriodSet, channels: ChannelSet) -> Result<Schedule, Error> {
    if bps.len() != 2 {
        return Err(Error::NotTwoPeriods(bps.len()));
    }
    let space = ConfigSpace::new(bps, channels);
    let deadlines: Vec<u64> = bps.periods().iter().map(|b| b * channels.count() as u64).collect();
    let horizon = deadlines[1];
    let mut found = vec![false; space.len()];
    let mut picks: Vec<usize> = Vec::with_capacity(horizon as usize);
    if !search(&space, &deadlines, horizon, &mut found, &mut picks) {
        return Err(Error::NoRecursiveSchedule(bps.to_string()));
    }
    let mut s = Schedule::with_horizon(horizon);
    for (t, &c) in picks.iter().enumerate() {
        s.scan(t as u64, c);
    }
    // Sanity: the result must be complete.
    let mut cov = Coverage::new(bps, channels);
    for (t, c) in s.scans() {
        cov.apply(c, t);
    }
    debug_assert!(cov.is_complete());
    Ok(s)
}

fn search(space: &ConfigSpace, deadlines: &[u64], horizon: u64, found: &mut [bool], picks: &mut Vec<usize>) -> bool {
    let t = picks.len() as u64;
    if t == horizon {
        return true;
    }
    let active: Vec<usize> = (0..deadlines.len()).filter(|&k| t < deadlines[k]).collect();
    for c in 0..space.channels() {
        let cells: Vec<usize> = active.iter().map(|&k| space.index_at_slot(c, k, t)).collect();
        if cells.iter().any(|&i| found[i]) {
            continue;
        }
        // Period entries past their deadline may also be hit; record them to undo.
        let mut marked = Vec::new();
        for k in 0..space.periods().len() {
            let i = space.index_at_slot(c, k, t);
            if !found[i] {
                found[i] = true;
                marked.push(i);
            }
        }
        picks.push(c);
        if search(space, deadlines, horizon, found, picks) {
            return true;
        }
        picks.pop();
        for i in marked {
            found[i] = false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bps(p: &[u64]) -> BeaconPeriodSet {
        BeaconPeriodSet::new(p.iter().copied()).unwrap()
    }

    fn ch(n: usize) -> ChannelSet {
        ChannelSet::new(n).unwrap()
    }

    #[test]
    fn two_three_two_channels() {
        let s = opt_b2(&bps(&[2, 3]), ch(2)).unwrap();
        let seq: Vec<(u64, usize)> = s.scans().collect();
        assert_eq!(seq, vec![(0, 0), (1, 0), (2, 1), (3, 1), (4, 1), (5, 0)]);
    }

    #[test]
    fn single_channel() {
        let s = opt_b2(&bps(&[1, 2]), ch(1)).unwrap();
        assert_eq!(s.scans().collect::<Vec<_>>(), vec![(0, 0), (1, 0)]);
    }

    #[test]
    fn rejects_other_sizes() {
        assert_eq!(opt_b2(&bps(&[1, 2, 3]), ch(2)), Err(Error::NotTwoPeriods(3)));
        assert_eq!(opt_b2(&bps(&[4]), ch(2)), Err(Error::NotTwoPeriods(1)));
    }
}
