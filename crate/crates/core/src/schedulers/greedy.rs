//! The GREEDY family and CHAN TRAIN.
//!
//! At every slot GREEDY scans a channel that maximizes the probability mass of
//! configurations discovered in that slot. Members of the family differ only in
//! how they break ties inside the argmax set, so every member inherits the
//! family's optimality guarantees.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::coverage::Coverage;
use crate::bps::{BeaconPeriodSet, ChannelSet};
use crate::schedule::Schedule;
use crate::Error;

/// Tie-breaking rule among channels with maximal expected gain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieBreak {
    /// Lowest channel index.
    First,
    /// The currently tuned channel if it is maximal, otherwise the lowest index.
    Stay,
    /// The maximal channel that stays maximal for the most consecutive slots
    /// when scanned repeatedly; ties resolved as [`TieBreak::Stay`].
    Lookahead,
}

impl TieBreak {
    pub const ALL: [TieBreak; 3] = [TieBreak::First, TieBreak::Stay, TieBreak::Lookahead];
}

impl fmt::Display for TieBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TieBreak::First => "first",
            TieBreak::Stay => "stay",
            TieBreak::Lookahead => "lookahead",
        })
    }
}

impl FromStr for TieBreak {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "first" => Ok(TieBreak::First),
            "stay" => Ok(TieBreak::Stay),
            "lookahead" => Ok(TieBreak::Lookahead),
            other => Err(Error::UnknownStrategy(other.to_string())),
        }
    }
}

/// Context handed to a tie-breaking function.
pub struct Candidates<'a> {
    /// Current slot.
    pub slot: u64,
    /// Channels in the argmax set, ascending.
    pub channels: &'a [usize],
    /// Channel the radio is tuned to (last scanned channel), if any.
    pub tuned: Option<usize>,
}

/// Slot cap for any GREEDY run: `LCM(B)·|C|`.
pub fn greedy_horizon_cap(bps: &BeaconPeriodSet, channels: ChannelSet) -> u64 {
    bps.lcm() * channels.count() as u64
}

/// Runs GREEDY with the given tie-breaking rule.
pub fn greedy(bps: &BeaconPeriodSet, channels: ChannelSet, tie: TieBreak) -> Result<Schedule, Error> {
    let window = bps.max() * channels.count() as u64;
    run_greedy(bps, channels, |cov, cand| match tie {
        TieBreak::First => cand.channels[0],
        TieBreak::Stay => prefer_tuned(cand),
        TieBreak::Lookahead => lookahead(cov, cand, window),
    })
}

/// Runs GREEDY with a caller-supplied tie-breaking function. The function must
/// return one of `candidates.channels`.
pub fn greedy_by<F>(bps: &BeaconPeriodSet, channels: ChannelSet, mut choose: F) -> Result<Schedule, Error>
where
    F: FnMut(&Candidates<'_>) -> usize,
{
    run_greedy(bps, channels, |_, cand| choose(cand))
}

fn run_greedy<F>(bps: &BeaconPeriodSet, channels: ChannelSet, mut choose: F) -> Result<Schedule, Error>
where
    F: FnMut(&Coverage, &Candidates<'_>) -> usize,
{
    let cap = greedy_horizon_cap(bps, channels);
    let mut cov = Coverage::new(bps, channels);
    let mut schedule = Schedule::new();
    let mut tuned = None;
    let mut t = 0;
    while !cov.is_complete() {
        if t >= cap {
            return Err(Error::HorizonExceeded(cap));
        }
        let values = cov.values(t);
        let best = values.iter().copied().max().unwrap_or(0);
        if best > 0 {
            let argmax: Vec<usize> = (0..values.len()).filter(|&c| values[c] == best).collect();
            let c = choose(&cov, &Candidates { slot: t, channels: &argmax, tuned });
            assert!(argmax.contains(&c), "tie-break picked channel {c} outside the argmax set");
            cov.apply(c, t);
            schedule.scan(t, c);
            tuned = Some(c);
        }
        t += 1;
    }
    Ok(schedule)
}

fn prefer_tuned(cand: &Candidates<'_>) -> usize {
    match cand.tuned {
        Some(c) if cand.channels.contains(&c) => c,
        _ => cand.channels[0],
    }
}

/// Number of consecutive slots after `cand.slot` during which `channel`
/// remains maximal if it is scanned at every one of them.
fn run_length(cov: &Coverage, channel: usize, slot: u64, window: u64) -> u64 {
    let mut sim = cov.clone();
    sim.apply(channel, slot);
    let mut len = 0;
    for s in slot + 1..slot + 1 + window {
        if sim.is_complete() {
            break;
        }
        let values = sim.values(s);
        let best = values.iter().copied().max().unwrap_or(0);
        if best == 0 || values[channel] != best {
            break;
        }
        sim.apply(channel, s);
        len += 1;
    }
    len
}

fn lookahead(cov: &Coverage, cand: &Candidates<'_>, window: u64) -> usize {
    if cand.channels.len() == 1 {
        return cand.channels[0];
    }
    let runs: Vec<u64> = cand.channels.iter().map(|&c| run_length(cov, c, cand.slot, window)).collect();
    let longest = runs.iter().copied().max().unwrap_or(0);
    let tied: Vec<usize> = cand.channels.iter().zip(&runs).filter(|(_, &r)| r == longest).map(|(&c, _)| c).collect();
    prefer_tuned(&Candidates { slot: cand.slot, channels: &tied, tuned: cand.tuned })
}

/// CHAN TRAIN: pick a maximal channel (lowest index), then keep scanning it
/// while its expected gain in the next slot is at least its gain in the
/// current slot.
pub fn chan_train(bps: &BeaconPeriodSet, channels: ChannelSet) -> Result<Schedule, Error> {
    let cap = greedy_horizon_cap(bps, channels);
    let mut cov = Coverage::new(bps, channels);
    let mut schedule = Schedule::new();
    let mut t = 0;
    while !cov.is_complete() {
        if t >= cap {
            return Err(Error::HorizonExceeded(cap));
        }
        let values = cov.values(t);
        let best = values.iter().copied().max().unwrap_or(0);
        if best == 0 {
            t += 1;
            continue;
        }
        let c = values.iter().position(|&v| v == best).expect("max exists");
        let mut current = best;
        cov.apply(c, t);
        schedule.scan(t, c);
        t += 1;
        while !cov.is_complete() && t < cap {
            let next = cov.value(c, t);
            if next < current {
                break;
            }
            cov.apply(c, t);
            schedule.scan(t, c);
            current = next;
            t += 1;
        }
    }
    Ok(schedule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discovery::{discovery_times, Rational};
    use crate::schedule::channel_switch_count;

    fn bps(p: &[u64]) -> BeaconPeriodSet {
        BeaconPeriodSet::new(p.iter().copied()).unwrap()
    }

    fn ch(n: usize) -> ChannelSet {
        ChannelSet::new(n).unwrap()
    }

    #[test]
    fn greedy_one_two_two_channels() {
        let s = greedy(&bps(&[1, 2]), ch(2), TieBreak::First).unwrap();
        let seq: Vec<(u64, usize)> = s.scans().collect();
        assert_eq!(seq, vec![(0, 0), (1, 1), (2, 1), (3, 0)]);
        let rep = discovery_times(&s, &bps(&[1, 2]), ch(2));
        assert_eq!(rep.mdt, Some(Rational::from_integer(1)));
    }

    #[test]
    fn greedy_example_two_values() {
        let b = bps(&[1, 2, 3]);
        let s = greedy(&b, ch(3), TieBreak::First).unwrap();
        let rep = discovery_times(&s, &b, ch(3));
        assert_eq!(rep.mdt, Some(Rational::new(49, 18)));
        assert!(rep.wdt.unwrap() > 9);

        let b = bps(&[2, 3, 4, 6, 12]);
        let s = greedy(&b, ch(2), TieBreak::First).unwrap();
        let rep = discovery_times(&s, &b, ch(2));
        assert_eq!(rep.wdt, Some(24));
        assert_eq!(rep.mdt, Some(Rational::new(53, 10)));
    }

    #[test]
    fn stay_never_switches_more_on_small_sets() {
        for p in [&[1, 2, 3][..], &[2, 3, 4, 6, 12], &[1, 2, 4], &[3, 5]] {
            for n in 1..=4 {
                let first = greedy(&bps(p), ch(n), TieBreak::First).unwrap();
                let stay = greedy(&bps(p), ch(n), TieBreak::Stay).unwrap();
                assert!(channel_switch_count(&stay) <= channel_switch_count(&first), "{p:?} {n}");
            }
        }
    }

    #[test]
    fn chan_train_differs_from_greedy_on_one_two_three_six() {
        let b = bps(&[1, 2, 3, 6]);
        let ct = chan_train(&b, ch(3)).unwrap();
        let g = greedy(&b, ch(3), TieBreak::First).unwrap();
        assert_ne!(ct, g);
        assert!(discovery_times(&ct, &b, ch(3)).is_complete());
    }

    #[test]
    fn chan_train_is_wdt_optimal_on_f2_example() {
        let b = bps(&[2, 3, 4, 6, 12]);
        let s = chan_train(&b, ch(2)).unwrap();
        assert_eq!(discovery_times(&s, &b, ch(2)).wdt, Some(24));
    }

    #[test]
    fn custom_tie_break_is_honoured() {
        let b = bps(&[1, 2, 4]);
        let s = greedy_by(&b, ch(3), |cand| *cand.channels.last().unwrap()).unwrap();
        assert_eq!(s.channel_at(0), Some(2));
    }

    #[test]
    fn tie_break_names() {
        for t in TieBreak::ALL {
            assert_eq!(t.to_string().parse::<TieBreak>().unwrap(), t);
        }
        assert!("random".parse::<TieBreak>().is_err());
    }
}
