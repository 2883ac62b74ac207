//! Neighbor configurations and exact discovery metrics (WDT, MDT, NDoT).

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::bps::{BeaconPeriodSet, ChannelSet};
use crate::schedule::Schedule;

/// Exact rational used for probabilities and mean discovery times.
pub type Rational = num_rational::Ratio<i128>;

/// A neighbor configuration: channel, beacon period and beacon offset,
/// with the probability of a neighbor having it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub channel: usize,
    pub period: u64,
    pub offset: u64,
    pub probability: Rational,
}

impl Configuration {
    /// `true` if this configuration transmits a beacon in `slot`.
    pub fn beacons_at(&self, slot: u64) -> bool {
        slot % self.period == self.offset
    }

    /// `(channel, period, offset)`.
    pub fn key(&self) -> (usize, u64, u64) {
        (self.channel, self.period, self.offset)
    }
}

/// Dense indexing of the full configuration space `K_BC` under the uniform
/// model, with integer weights.
///
/// Configuration `(c, b, δ)` has probability `weight(b) / denominator()`
/// where `weight(b) = lcm(B) / b` and `denominator() = lcm(B)·|B|·|C|`.
#[derive(Clone, Debug)]
pub struct ConfigSpace {
    periods: Vec<u64>,
    prefix: Vec<u64>,
    per_channel: u64,
    channels: usize,
    lcm: u64,
}

impl ConfigSpace {
    pub fn new(bps: &BeaconPeriodSet, channels: ChannelSet) -> Self {
        let periods = bps.periods().to_vec();
        let mut prefix = Vec::with_capacity(periods.len());
        let mut acc = 0;
        for &b in &periods {
            prefix.push(acc);
            acc += b;
        }
        Self { periods, prefix, per_channel: acc, channels: channels.count(), lcm: bps.lcm() }
    }

    pub fn len(&self) -> usize {
        (self.per_channel as usize) * self.channels
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn periods(&self) -> &[u64] {
        &self.periods
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// Index of configuration `(channel, periods()[period_idx], offset)`.
    pub fn index(&self, channel: usize, period_idx: usize, offset: u64) -> usize {
        (channel as u64 * self.per_channel + self.prefix[period_idx] + offset) as usize
    }

    /// Index of the configuration on `channel` with period `periods()[period_idx]`
    /// that beacons in `slot`.
    pub fn index_at_slot(&self, channel: usize, period_idx: usize, slot: u64) -> usize {
        self.index(channel, period_idx, slot % self.periods[period_idx])
    }

    pub fn weight(&self, period_idx: usize) -> u64 {
        self.lcm / self.periods[period_idx]
    }

    pub fn denominator(&self) -> u64 {
        self.lcm * self.periods.len() as u64 * self.channels as u64
    }

    /// Converts a sum of weights to a probability.
    pub fn probability_of(&self, weight_sum: u128) -> Rational {
        Rational::new(weight_sum as i128, self.denominator() as i128)
    }

    /// `(channel, period_idx, offset)` for a dense index.
    pub fn decode(&self, index: usize) -> (usize, usize, u64) {
        let index = index as u64;
        let channel = (index / self.per_channel) as usize;
        let rest = index % self.per_channel;
        let period_idx = self.prefix.partition_point(|&p| p <= rest) - 1;
        (channel, period_idx, rest - self.prefix[period_idx])
    }

    /// All configurations in index order.
    pub fn configurations(&self) -> Vec<Configuration> {
        let mut out = Vec::with_capacity(self.len());
        for c in 0..self.channels {
            for (k, &b) in self.periods.iter().enumerate() {
                let p = self.probability_of(self.weight(k) as u128);
                for d in 0..b {
                    out.push(Configuration { channel: c, period: b, offset: d, probability: p });
                }
            }
        }
        out
    }
}

/// Every configuration `(c, b, δ)` with its uniform-model probability
/// `1 / (b·|B|·|C|)`.
pub fn configuration_space(bps: &BeaconPeriodSet, channels: ChannelSet) -> Vec<Configuration> {
    ConfigSpace::new(bps, channels).configurations()
}

/// Duration, in slots, of the fastest complete discovery: `max(B)·|C|`.
pub fn optimal_wdt(bps: &BeaconPeriodSet, channels: ChannelSet) -> u64 {
    bps.max() * channels.count() as u64
}

/// Discovery times of every configuration under a schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscoveryReport {
    /// Discovery slot per configuration, in [`configuration_space`] order.
    pub times: Vec<(Configuration, Option<u64>)>,
    /// Last discovery slot plus one; `None` when some configuration is never discovered.
    pub wdt: Option<u64>,
    /// `Σ P_κ·T_κ`; `None` when incomplete.
    pub mdt: Option<Rational>,
    /// `(slot, P[T ≤ slot])` at every slot where the cumulative probability rises.
    pub ndot: Vec<(u64, Rational)>,
}

impl DiscoveryReport {
    pub fn is_complete(&self) -> bool {
        self.wdt.is_some()
    }

    /// Probability mass discovered strictly before slot `slots`.
    pub fn discovered_within(&self, slots: u64) -> Rational {
        self.ndot.iter().take_while(|(t, _)| *t < slots).last().map(|(_, p)| *p).unwrap_or_else(Rational::zero)
    }

    /// Discovery time of configuration `(channel, period, offset)`.
    pub fn time_of(&self, channel: usize, period: u64, offset: u64) -> Option<u64> {
        self.times.iter().find(|(k, _)| k.key() == (channel, period, offset)).and_then(|(_, t)| *t)
    }

    pub fn undiscovered(&self) -> usize {
        self.times.iter().filter(|(_, t)| t.is_none()).count()
    }
}

/// Computes `T_κ` for every configuration: the first scanned slot on the
/// configuration's channel that carries one of its beacons.
pub fn discovery_times(schedule: &Schedule, bps: &BeaconPeriodSet, channels: ChannelSet) -> DiscoveryReport {
    let space = ConfigSpace::new(bps, channels);
    let mut time: Vec<Option<u64>> = vec![None; space.len()];
    let mut remaining = space.len();
    for (t, c) in schedule.scans() {
        if remaining == 0 {
            break;
        }
        if c >= channels.count() {
            continue;
        }
        for k in 0..space.periods().len() {
            let i = space.index_at_slot(c, k, t);
            if time[i].is_none() {
                time[i] = Some(t);
                remaining -= 1;
            }
        }
    }

    let configs = space.configurations();
    let complete = remaining == 0;
    let wdt = complete.then(|| time.iter().map(|t| t.expect("complete") + 1).max().unwrap_or(0));
    let mdt = complete.then(|| {
        let mut sum: u128 = 0;
        for (i, t) in time.iter().enumerate() {
            let (_, k, _) = space.decode(i);
            sum += space.weight(k) as u128 * t.expect("complete") as u128;
        }
        space.probability_of(sum)
    });

    let mut by_slot: Vec<(u64, u128)> =
        time.iter().enumerate().filter_map(|(i, t)| t.map(|t| (t, space.weight(space.decode(i).1) as u128))).collect();
    by_slot.sort_unstable();
    let mut ndot: Vec<(u64, Rational)> = Vec::new();
    let mut acc: u128 = 0;
    for (t, w) in by_slot {
        acc += w;
        match ndot.last_mut() {
            Some((last, p)) if *last == t => *p = space.probability_of(acc),
            _ => ndot.push((t, space.probability_of(acc))),
        }
    }

    DiscoveryReport { times: configs.into_iter().zip(time).collect(), wdt, mdt, ndot }
}

/// Expected number of new discoveries (probability mass) gained at every
/// slot in `0..schedule.horizon()`; idle slots gain zero.
pub fn slot_gains(schedule: &Schedule, bps: &BeaconPeriodSet, channels: ChannelSet) -> Vec<Rational> {
    let space = ConfigSpace::new(bps, channels);
    let mut found = vec![false; space.len()];
    let mut gains = vec![Rational::zero(); schedule.horizon() as usize];
    for (t, c) in schedule.scans() {
        if c >= channels.count() {
            continue;
        }
        let mut w: u128 = 0;
        for k in 0..space.periods().len() {
            let i = space.index_at_slot(c, k, t);
            if !found[i] {
                found[i] = true;
                w += space.weight(k) as u128;
            }
        }
        gains[t as usize] = space.probability_of(w);
    }
    gains
}

/// Renders a rational as a decimal with `digits` fractional digits, rounded
/// half away from zero.
pub fn format_decimal(value: &Rational, digits: usize) -> String {
    let neg = value.is_negative();
    let v = value.abs();
    let scale = 10i128.pow(digits as u32);
    let scaled = v * Rational::from_integer(scale);
    let mut units = scaled.trunc().to_integer();
    if scaled.fract() * Rational::from_integer(2) >= Rational::one() {
        units += 1;
    }
    let int = units / scale;
    let frac = units % scale;
    let sign = if neg && units != 0 { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac:0width$}", width = digits)
    }
}

/// Renders a rational as `p/q` (or `p` when integral).
pub fn format_ratio(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses `p/q`, an integer, or a finite decimal such as `2.75`.
pub fn parse_ratio(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let q: i128 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Rational::new(p.trim().parse().ok()?, q));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let neg = int.starts_with('-');
        let int: i128 = if int.is_empty() || int == "-" { 0 } else { int.parse().ok()? };
        let scale = 10i128.checked_pow(frac.len() as u32)?;
        let f: i128 = frac.parse().ok()?;
        let mag = int.abs() * scale + f;
        return Some(Rational::new(if neg { -mag } else { mag }, scale));
    }
    text.parse().ok().map(Rational::from_integer)
}

/// Nearest `f64` to a rational.
pub fn to_f64(value: &Rational) -> f64 {
    value.numer().to_f64().unwrap_or(f64::NAN) / value.denom().to_f64().unwrap_or(f64::NAN)
}

impl Serialize for DiscoveryReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let times: Vec<(usize, u64, u64, Option<u64>)> =
            self.times.iter().map(|(k, t)| (k.channel, k.period, k.offset, *t)).collect();
        let ndot: Vec<(u64, String)> = self.ndot.iter().map(|(t, p)| (*t, format_ratio(p))).collect();
        let mut st = s.serialize_struct("DiscoveryReport", 4)?;
        st.serialize_field("times", &times)?;
        st.serialize_field("wdt", &self.wdt)?;
        st.serialize_field("mdt", &self.mdt.as_ref().map(format_ratio))?;
        st.serialize_field("ndot", &ndot)?;
        st.end()
    }
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

    fn r(p: i128, q: i128) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn configuration_space_examples() {
        let one = configuration_space(&bps(&[1]), ch(1));
        assert_eq!(one, vec![Configuration { channel: 0, period: 1, offset: 0, probability: r(1, 1) }]);

        let small = configuration_space(&bps(&[1, 2]), ch(2));
        assert_eq!(small.len(), 6);
        for k in &small {
            let expected = if k.period == 1 { r(1, 4) } else { r(1, 8) };
            assert_eq!(k.probability, expected);
        }

        let f2 = configuration_space(&bps(&[2, 3, 4, 6, 12]), ch(2));
        assert_eq!(f2.len(), 54);
        let total: Rational = f2.iter().map(|k| k.probability).sum();
        assert_eq!(total, Rational::one());
    }

    #[test]
    fn config_space_index_round_trip() {
        let space = ConfigSpace::new(&bps(&[2, 3, 5]), ch(3));
        for (i, k) in space.configurations().iter().enumerate() {
            let idx = space.periods().iter().position(|&b| b == k.period).unwrap();
            assert_eq!(space.index(k.channel, idx, k.offset), i);
            assert_eq!(space.decode(i), (k.channel, idx, k.offset));
        }
    }

    #[test]
    fn psv_shape_discovery_times() {
        let s = Schedule::from_scans([(0, 0), (1, 0), (2, 1), (3, 1)]).unwrap();
        let rep = discovery_times(&s, &bps(&[2]), ch(2));
        assert_eq!(rep.time_of(0, 2, 0), Some(0));
        assert_eq!(rep.time_of(0, 2, 1), Some(1));
        assert_eq!(rep.time_of(1, 2, 0), Some(2));
        assert_eq!(rep.time_of(1, 2, 1), Some(3));
        assert_eq!(rep.mdt, Some(r(3, 2)));
        assert_eq!(rep.wdt, Some(4));
        assert_eq!(rep.ndot.last().unwrap().1, Rational::one());
    }

    #[test]
    fn empty_schedule_discovers_nothing() {
        let rep = discovery_times(&Schedule::new(), &bps(&[1, 2, 3]), ch(2));
        assert!(rep.times.iter().all(|(_, t)| t.is_none()));
        assert_eq!(rep.wdt, None);
        assert_eq!(rep.mdt, None);
        assert!(rep.ndot.is_empty());
        assert_eq!(rep.discovered_within(100), Rational::zero());
    }

    #[test]
    fn greedy_trace_for_one_two() {
        // c0, c1, c1, c0 on B={1,2}, two channels.
        let s = Schedule::from_scans([(0, 0), (1, 1), (2, 1), (3, 0)]).unwrap();
        let rep = discovery_times(&s, &bps(&[1, 2]), ch(2));
        // (0,1,0)@0 (0,2,0)@0 (1,1,0)@1 (1,2,1)@1 (1,2,0)@2 (0,2,1)@3
        let oracle = r(1, 4) + r(1, 8) + r(1, 8) * 2 + r(1, 8) * 3;
        assert_eq!(rep.mdt, Some(oracle));
        assert_eq!(rep.mdt, Some(Rational::one()));
    }

    #[test]
    fn incomplete_within_horizon_leaves_partial_cdf() {
        let s = Schedule::from_scans([(0, 0)]).unwrap();
        let rep = discovery_times(&s, &bps(&[2]), ch(1));
        assert!(!rep.is_complete());
        assert_eq!(rep.undiscovered(), 1);
        assert_eq!(rep.discovered_within(1), r(1, 2));
    }

    #[test]
    fn optimal_wdt_values() {
        assert_eq!(optimal_wdt(&bps(&[1, 2, 3]), ch(3)), 9);
        assert_eq!(optimal_wdt(&bps(&[1]), ch(5)), 5);
        assert_eq!(optimal_wdt(&bps(&[2, 3, 4, 6, 12]), ch(2)), 24);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(format_decimal(&r(49, 18), 12), "2.722222222222");
        assert_eq!(format_decimal(&r(47, 18), 12), "2.611111111111");
        assert_eq!(format_decimal(&r(2, 3), 2), "0.67");
        assert_eq!(format_decimal(&r(-1, 2), 0), "-1");
        assert_eq!(format_decimal(&r(53, 10), 1), "5.3");
        assert_eq!(format_ratio(&r(47, 18)), "47/18");
        assert_eq!(format_ratio(&r(4, 2)), "2");
        assert_eq!(parse_ratio("2.875"), Some(r(23, 8)));
        assert_eq!(parse_ratio("47/18"), Some(r(47, 18)));
        assert_eq!(parse_ratio("5"), Some(r(5, 1)));
        assert_eq!(parse_ratio("1/0"), None);
    }

    #[test]
    fn gains_sum_to_one_for_complete_schedules() {
        let s = Schedule::from_scans([(0, 0), (1, 1), (2, 1), (3, 0)]).unwrap();
        let g = slot_gains(&s, &bps(&[1, 2]), ch(2));
        assert_eq!(g, vec![r(3, 8), r(3, 8), r(1, 8), r(1, 8)]);
        assert_eq!(g.iter().sum::<Rational>(), Rational::one());
    }

    #[test]
    fn report_json_shape() {
        let s = Schedule::from_scans([(0, 0)]).unwrap();
        let rep = discovery_times(&s, &bps(&[2]), ch(1));
        let json = serde_json::to_string(&rep).unwrap();
        assert_eq!(json, r#"{"times":[[0,2,0,0],[0,2,1,null]],"wdt":null,"mdt":null,"ndot":[[0,"1/2"]]}"#);
    }
}
