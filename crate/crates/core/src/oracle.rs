//! Brute-force ground truth for tiny instances, and schedule verifiers.
//!
//! Nothing here depends on the schedulers or the optimizer; only the shared
//! model types and [`discovery_times`] are used.

use num_traits::Zero;
use serde::Serialize;

use crate::bps::{BeaconPeriodSet, ChannelSet};
use crate::discovery::{configuration_space, discovery_times, optimal_wdt, Rational};
use crate::schedule::Schedule;
use crate::Error;

/// Default cap on search nodes visited by [`brute_force_mdt_optimal`].
pub const DEFAULT_LEAF_CEILING: u64 = 100_000_000;

/// Default cap on `max(B)·|C|` for [`recursive_schedule_exists`].
pub const DEFAULT_RECURSIVE_CEILING: u64 = 4096;

/// `true` if every configuration is discovered.
pub fn is_complete(schedule: &Schedule, bps: &BeaconPeriodSet, channels: ChannelSet) -> bool {
    discovery_times(schedule, bps, channels).is_complete()
}

/// `true` if the schedule is complete and, for every period `b`, discovers all
/// period-`b` configurations before slot `b·|C|`.
pub fn is_recursive(schedule: &Schedule, bps: &BeaconPeriodSet, channels: ChannelSet) -> bool {
    let rep = discovery_times(schedule, bps, channels);
    rep.is_complete() && rep.times.iter().all(|(k, t)| t.expect("complete") < k.period * channels.count() as u64)
}

/// `true` if the schedule is complete within `max(B)·|C|` slots.
pub fn is_wdt_optimal(schedule: &Schedule, bps: &BeaconPeriodSet, channels: ChannelSet) -> bool {
    discovery_times(schedule, bps, channels).wdt == Some(optimal_wdt(bps, channels))
}

/// Summary produced by the `verify` command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub complete: bool,
    pub recursive: bool,
    pub wdt_optimal: bool,
    pub wdt: Option<u64>,
    #[serde(serialize_with = "ser_opt_ratio")]
    pub mdt: Option<Rational>,
}

fn ser_opt_ratio<S: serde::Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&crate::discovery::format_ratio(r)),
        None => s.serialize_none(),
    }
}

pub fn verify(schedule: &Schedule, bps: &BeaconPeriodSet, channels: ChannelSet) -> Verdict {
    let rep = discovery_times(schedule, bps, channels);
    Verdict {
        complete: rep.is_complete(),
        recursive: is_recursive(schedule, bps, channels),
        wdt_optimal: rep.wdt == Some(optimal_wdt(bps, channels)),
        wdt: rep.wdt,
        mdt: rep.mdt,
    }
}

struct Brute<'a> {
    periods: &'a [u64],
    channels: usize,
    t_max: u64,
    // Per configuration: (channel, period, offset, probability); found flag kept alongside.
    configs: Vec<(usize, u64, u64, Rational)>,
    found: Vec<bool>,
    nodes: u64,
    ceiling: u64,
    best: Option<(Rational, Vec<Option<usize>>)>,
    picks: Vec<Option<usize>>,
}

impl Brute<'_> {
    fn lookup(&self, c: usize, b: u64, d: u64) -> usize {
        let per_channel: u64 = self.periods.iter().sum();
        let before: u64 = self.periods.iter().take_while(|&&p| p < b).sum();
        (c as u64 * per_channel + before + d) as usize
    }

    fn optimistic_rest(&self, t: u64) -> Option<Rational> {
        let mut sum = Rational::zero();
        for (i, &(_, b, d, p)) in self.configs.iter().enumerate() {
            if self.found[i] {
                continue;
            }
            let first = t + (d + b - t % b) % b;
            if first > self.t_max {
                return None;
            }
            sum += p * Rational::from_integer(first as i128);
        }
        Some(sum)
    }

    fn run(&mut self, t: u64, partial: Rational, touched: usize) -> Result<(), Error> {
        self.nodes += 1;
        if self.nodes > self.ceiling {
            return Err(Error::CeilingExceeded(format!(
                "more than {} search nodes; shrink t_max, |B| or |C|",
                self.ceiling
            )));
        }
        if self.found.iter().all(|&f| f) {
            if self.best.as_ref().is_none_or(|(v, _)| partial < *v) {
                self.best = Some((partial, self.picks.clone()));
            }
            return Ok(());
        }
        let Some(rest) = self.optimistic_rest(t) else { return Ok(()) };
        if let Some((v, _)) = &self.best {
            if partial + rest >= *v {
                return Ok(());
            }
        }
        // Channels never scanned so far are interchangeable; try only the first of them.
        let limit = (touched + 1).min(self.channels);
        let mut options: Vec<Option<usize>> = (0..limit).map(Some).collect();
        options.push(None);
        for opt in options {
            let mut newly = Vec::new();
            let mut gain = Rational::zero();
            if let Some(c) = opt {
                for &b in self.periods {
                    let i = self.lookup(c, b, t % b);
                    if !self.found[i] {
                        self.found[i] = true;
                        gain += self.configs[i].3 * Rational::from_integer(t as i128);
                        newly.push(i);
                    }
                }
            }
            self.picks.push(opt);
            let touched_next = match opt {
                Some(c) if c == touched => touched + 1,
                _ => touched,
            };
            self.run(t + 1, partial + gain, touched_next)?;
            self.picks.pop();
            for i in newly {
                self.found[i] = false;
            }
        }
        Ok(())
    }
}

/// Exhaustive search over channel-or-idle per slot in `0..=t_max` for a
/// complete schedule of minimal MDT. Subtrees are cut only when an optimistic
/// completion (every undiscovered configuration at its next beacon) cannot
/// beat the incumbent, so the result equals full enumeration.
pub fn brute_force_mdt_optimal(
    bps: &BeaconPeriodSet,
    channels: ChannelSet,
    t_max: u64,
) -> Result<(Rational, Schedule), Error> {
    brute_force_mdt_optimal_with_ceiling(bps, channels, t_max, DEFAULT_LEAF_CEILING)
}

pub fn brute_force_mdt_optimal_with_ceiling(
    bps: &BeaconPeriodSet,
    channels: ChannelSet,
    t_max: u64,
    ceiling: u64,
) -> Result<(Rational, Schedule), Error> {
    let configs = configuration_space(bps, channels)
        .into_iter()
        .map(|k| (k.channel, k.period, k.offset, k.probability))
        .collect::<Vec<_>>();
    let n = configs.len();
    let mut brute = Brute {
        periods: bps.periods(),
        channels: channels.count(),
        t_max,
        configs,
        found: vec![false; n],
        nodes: 0,
        ceiling,
        best: None,
        picks: Vec::new(),
    };
    brute.run(0, Rational::zero(), 0)?;
    let (value, picks) =
        brute.best.ok_or_else(|| Error::HorizonTooShort { t_max, entity: "some configuration".into() })?;
    let mut s = Schedule::new();
    for (t, c) in picks.iter().enumerate() {
        if let Some(c) = c {
            s.scan(t as u64, *c);
        }
    }
    Ok((value, s))
}

/// Decides whether a recursive schedule exists; returns a witness if so.
///
/// Slots are filled in ascending order with a channel or idle. A branch is cut
/// when some period `b` has more undiscovered configurations than slots left
/// before its deadline `b·|C|` (one period-`b` configuration per slot at most).
pub fn recursive_schedule_exists(bps: &BeaconPeriodSet, channels: ChannelSet) -> Result<Option<Schedule>, Error> {
    let horizon = optimal_wdt(bps, channels);
    if horizon > DEFAULT_RECURSIVE_CEILING {
        return Err(Error::CeilingExceeded(format!("max(B)·|C| = {horizon} exceeds {DEFAULT_RECURSIVE_CEILING}")));
    }
    let n = channels.count();
    let periods = bps.periods();
    // found[k][c][d]
    let mut found: Vec<Vec<Vec<bool>>> = periods.iter().map(|&b| vec![vec![false; b as usize]; n]).collect();
    let mut left: Vec<u64> = periods.iter().map(|&b| b * n as u64).collect();
    let mut picks = Vec::new();
    let mut nodes = 0u64;
    let ok = rec_search(periods, n, horizon, &mut found, &mut left, &mut picks, &mut nodes)?;
    if !ok {
        return Ok(None);
    }
    let mut s = Schedule::with_horizon(horizon);
    for (t, c) in picks.iter().enumerate() {
        if let Some(c) = c {
            s.scan(t as u64, *c);
        }
    }
    Ok(Some(s))
}

fn rec_search(
    periods: &[u64],
    n: usize,
    horizon: u64,
    found: &mut [Vec<Vec<bool>>],
    left: &mut [u64],
    picks: &mut Vec<Option<usize>>,
    nodes: &mut u64,
) -> Result<bool, Error> {
    *nodes += 1;
    if *nodes > DEFAULT_LEAF_CEILING {
        return Err(Error::CeilingExceeded(format!("more than {DEFAULT_LEAF_CEILING} search nodes")));
    }
    let t = picks.len() as u64;
    let feasible = periods.iter().zip(left.iter()).all(|(&b, &l)| l <= (b * n as u64).saturating_sub(t));
    if !feasible {
        return Ok(false);
    }
    if left.iter().all(|&l| l == 0) {
        return Ok(true);
    }
    if t >= horizon {
        return Ok(false);
    }
    let mut options: Vec<Option<usize>> = (0..n).map(Some).collect();
    options.push(None);
    for opt in options {
        let mut newly = Vec::new();
        if let Some(c) = opt {
            for (k, &b) in periods.iter().enumerate() {
                let d = (t % b) as usize;
                if !found[k][c][d] {
                    found[k][c][d] = true;
                    left[k] -= 1;
                    newly.push((k, d));
                }
            }
        }
        picks.push(opt);
        if rec_search(periods, n, horizon, found, left, picks, nodes)? {
            return Ok(true);
        }
        picks.pop();
        if let Some(c) = opt {
            for (k, d) in newly {
                found[k][c][d] = false;
                left[k] += 1;
            }
        }
    }
    Ok(false)
}

/// Every schedule over `slots` slots (channel or idle per slot), in
/// lexicographic order. Intended for exhaustive checks on tiny instances.
pub fn all_schedules(channels: ChannelSet, slots: u64) -> impl Iterator<Item = Schedule> {
    let base = channels.count() as u64 + 1;
    let total = base.checked_pow(slots as u32).expect("enumeration too large");
    (0..total).map(move |mut code| {
        let mut s = Schedule::with_horizon(slots);
        for t in 0..slots {
            let digit = code % base;
            code /= base;
            if digit > 0 {
                s.scan(t, (digit - 1) as usize);
            }
        }
        s
    })
}

/// `true` if curve `a` is pointwise at least curve `b` at every slot boundary up to `slots`.
pub fn ndot_dominates(
    a: &crate::discovery::DiscoveryReport,
    b: &crate::discovery::DiscoveryReport,
    slots: u64,
) -> bool {
    (1..=slots).all(|s| a.discovered_within(s) >= b.discovered_within(s))
}
