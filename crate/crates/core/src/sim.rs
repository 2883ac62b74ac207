//! Slotted discovery simulation with channel-switch deaf periods.
//!
//! A neighbor `(c, b, δ, φ)` beacons at slots `δ, δ+b, …` at intra-slot
//! position `φ ∈ [0,1)`. A scan of channel `c` in slot `t` receives that beacon
//! unless the radio switched channels entering `t` and `φ` falls inside the
//! deaf fraction at the start of the slot.

use std::io;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bps::{BeaconPeriodSet, ChannelSet};
use crate::optimal::{build_sample_mdt, build_sample_wdt, solve_exact, HorizonRule, SolveStatus};
use crate::schedule::{channel_switch_count, Schedule};
use crate::schedulers::Strategy;
use crate::Error;

/// A concrete beaconing neighbor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Neighbor {
    pub channel: usize,
    pub period: u64,
    pub offset: u64,
    /// Position of every beacon inside its slot, in `[0, 1)`.
    pub phase: f64,
}

impl Neighbor {
    pub fn validate(&self, bps: &BeaconPeriodSet, channels: ChannelSet) -> Result<(), String> {
        if self.channel >= channels.count() {
            return Err(format!("channel {} out of range", self.channel));
        }
        if !bps.contains(self.period) {
            return Err(format!("period {} not in {bps}", self.period));
        }
        if self.offset >= self.period {
            return Err(format!("offset {} not below period {}", self.offset, self.period));
        }
        if !(0.0..1.0).contains(&self.phase) {
            return Err(format!("phase {} outside [0,1)", self.phase));
        }
        Ok(())
    }
}

/// One simulated setting.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub bps: BeaconPeriodSet,
    pub channels: ChannelSet,
    pub neighbor_count: usize,
    pub deaf_fraction: f64,
    pub trials: usize,
    pub seed: u64,
}

impl Scenario {
    pub fn validate(&self) -> Result<(), Error> {
        if self.neighbor_count == 0 {
            return Err(Error::InvalidScenario("neighbor count must be positive".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidScenario("trial count must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.deaf_fraction) {
            return Err(Error::InvalidScenario(format!("deaf fraction {} outside [0,1)", self.deaf_fraction)));
        }
        Ok(())
    }

    /// Population of trial `trial`.
    pub fn population(&self, trial: usize) -> Vec<Neighbor> {
        sample_neighbors(&self.bps, self.channels, self.neighbor_count, trial_seed(self.seed, trial as u64))
    }
}

/// Seed of trial `trial` derived from a scenario seed (SplitMix64 of both).
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    let mut z = seed ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws `count` neighbors from a ChaCha8 stream seeded with `seed`. For each
/// neighbor in index order the draws are: period (uniform over `B`), offset
/// (uniform below the period), channel (uniform), phase (uniform in `[0,1)`).
pub fn sample_neighbors(bps: &BeaconPeriodSet, channels: ChannelSet, count: usize, seed: u64) -> Vec<Neighbor> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let periods = bps.periods();
    (0..count)
        .map(|_| {
            let period = periods[rng.random_range(0..periods.len())];
            let offset = rng.random_range(0..period);
            let channel = rng.random_range(0..channels.count());
            let phase: f64 = rng.random();
            Neighbor { channel, period, offset, phase }
        })
        .collect()
}

/// Result of running one schedule against one population.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialOutcome {
    /// Discovery slot per neighbor; `None` if missed.
    pub times: Vec<Option<u64>>,
    pub success_rate: f64,
    /// Mean discovery slot over discovered neighbors.
    pub smdt: Option<f64>,
    /// Latest discovery slot over discovered neighbors.
    pub swdt: Option<u64>,
    pub switches: usize,
}

impl TrialOutcome {
    pub fn discovered(&self) -> usize {
        self.times.iter().filter(|t| t.is_some()).count()
    }

    /// Fraction of all neighbors discovered strictly before slot `slots`.
    pub fn sndot_at(&self, slots: u64) -> f64 {
        let hit = self.times.iter().filter(|t| t.is_some_and(|t| t < slots)).count();
        hit as f64 / self.times.len() as f64
    }
}

/// Runs `schedule` against `neighbors` under the deaf-period model.
pub fn run_trial(schedule: &Schedule, neighbors: &[Neighbor], deaf_fraction: f64) -> TrialOutcome {
    let horizon = schedule.horizon();
    let mut switch_in = vec![false; horizon as usize];
    for t in schedule.switch_slots() {
        switch_in[t as usize] = true;
    }
    let times: Vec<Option<u64>> = neighbors
        .iter()
        .map(|n| {
            let mut t = n.offset;
            while t < horizon {
                if schedule.channel_at(t) == Some(n.channel) && !(switch_in[t as usize] && n.phase < deaf_fraction) {
                    return Some(t);
                }
                t += n.period;
            }
            None
        })
        .collect();
    let found: Vec<u64> = times.iter().flatten().copied().collect();
    let success_rate = if neighbors.is_empty() { 1.0 } else { found.len() as f64 / neighbors.len() as f64 };
    let smdt = (!found.is_empty()).then(|| found.iter().sum::<u64>() as f64 / found.len() as f64);
    let swdt = found.iter().copied().max();
    TrialOutcome { times, success_rate, smdt, swdt, switches: channel_switch_count(schedule) }
}

/// Sample mean and 95% normal-approximation half-width.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub ci95: f64,
    pub samples: usize,
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Option<Estimate> {
        if xs.is_empty() {
            return None;
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let ci95 = if xs.len() < 2 {
            0.0
        } else {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            1.96 * (var / n).sqrt()
        };
        Some(Estimate { mean, ci95, samples: xs.len() })
    }
}

/// Largest ILP horizon accepted for per-trial normalization.
pub const ILP_HORIZON_CEILING: u64 = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    /// Normalize SMDT/SWDT by per-trial optima instead of `max(B)·|C|`.
    pub normalize_ilp: bool,
    pub node_limit: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { normalize_ilp: false, node_limit: 2_000_000 }
    }
}

pub const METRICS: [&str; 6] = ["success_rate", "smdt", "swdt", "smdt_slots", "swdt_slots", "switches"];

#[derive(Clone, Debug, PartialEq)]
pub struct MetricRow {
    pub scenario_id: String,
    pub strategy: Strategy,
    pub metric: &'static str,
    pub estimate: Estimate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SndotRow {
    pub scenario_id: String,
    pub strategy: Strategy,
    pub normalized_time: f64,
    pub fraction: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Evaluation {
    pub metrics: Vec<MetricRow>,
    pub sndot: Vec<SndotRow>,
}

impl Evaluation {
    pub fn get(&self, scenario_id: &str, strategy: Strategy, metric: &str) -> Option<Estimate> {
        self.metrics
            .iter()
            .find(|r| r.scenario_id == scenario_id && r.strategy == strategy && r.metric == metric)
            .map(|r| r.estimate)
    }
}

struct TrialRecord {
    outcome: TrialOutcome,
    smdt_norm: Option<f64>,
    swdt_norm: Option<f64>,
}

fn optimum(model: Result<crate::optimal::IlpModel, Error>, node_limit: u64) -> Result<f64, Error> {
    let sol = solve_exact(&model?, node_limit);
    match (sol.status, sol.objective) {
        (SolveStatus::Optimal, Some(v)) => Ok(crate::discovery::to_f64(&v)),
        (status, _) => Err(Error::NotSolved(format!("{status:?} after {} nodes", sol.nodes))),
    }
}

fn ratio(value: f64, optimum: f64) -> f64 {
    if optimum == 0.0 {
        if value == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        value / optimum
    }
}

/// Runs every strategy of every scenario and aggregates per-trial metrics.
///
/// Populations depend only on the scenario seed and trial index, so all
/// strategies of a scenario face the same neighbors.
pub fn evaluate(grid: &[(Scenario, Vec<Strategy>)], options: EvalOptions) -> Result<Evaluation, Error> {
    let mut eval = Evaluation::default();
    for (scenario, strategies) in grid {
        scenario.validate()?;
        let bps = &scenario.bps;
        let channels = scenario.channels;
        let unit = (bps.max() * channels.count() as u64) as f64;
        if options.normalize_ilp {
            let t_max = HorizonRule::Default.resolve(bps, channels);
            if t_max > ILP_HORIZON_CEILING {
                return Err(Error::CeilingExceeded(format!(
                    "ILP normalization horizon {t_max} exceeds {ILP_HORIZON_CEILING}"
                )));
            }
        }
        let populations: Vec<Vec<Neighbor>> =
            (0..scenario.trials).into_par_iter().map(|i| scenario.population(i)).collect();
        let optima: Vec<Option<(f64, f64)>> = if options.normalize_ilp {
            populations
                .par_iter()
                .map(|pop| {
                    let mdt = optimum(build_sample_mdt(pop, bps, channels, HorizonRule::Default), options.node_limit)?;
                    let wdt = optimum(build_sample_wdt(pop, bps, channels, HorizonRule::Default), options.node_limit)?;
                    Ok(Some((mdt, wdt)))
                })
                .collect::<Result<_, Error>>()?
        } else {
            vec![None; populations.len()]
        };

        for &strategy in strategies {
            let schedule = strategy.generate(bps, channels)?;
            let records: Vec<TrialRecord> = populations
                .par_iter()
                .zip(optima.par_iter())
                .map(|(pop, opt)| {
                    let outcome = run_trial(&schedule, pop, scenario.deaf_fraction);
                    let (smdt_norm, swdt_norm) = match opt {
                        Some((m, w)) => (outcome.smdt.map(|s| ratio(s, *m)), outcome.swdt.map(|s| ratio(s as f64, *w))),
                        None => (outcome.smdt.map(|s| s / unit), outcome.swdt.map(|s| s as f64 / unit)),
                    };
                    TrialRecord { outcome, smdt_norm, swdt_norm }
                })
                .collect();

            let column =
                |f: &dyn Fn(&TrialRecord) -> Option<f64>| -> Vec<f64> { records.iter().filter_map(f).collect() };
            let series: [Vec<f64>; 6] = [
                column(&|r| Some(r.outcome.success_rate)),
                column(&|r| r.smdt_norm),
                column(&|r| r.swdt_norm),
                column(&|r| r.outcome.smdt),
                column(&|r| r.outcome.swdt.map(|s| s as f64)),
                column(&|r| Some(r.outcome.switches as f64)),
            ];
            for (metric, xs) in METRICS.iter().zip(series.iter()) {
                if let Some(estimate) = Estimate::from_samples(xs) {
                    eval.metrics.push(MetricRow { scenario_id: scenario.id.clone(), strategy, metric, estimate });
                }
            }

            let horizon = schedule.horizon().max(1);
            for k in 1..=horizon {
                let fraction = records.iter().map(|r| r.outcome.sndot_at(k)).sum::<f64>() / records.len() as f64;
                eval.sndot.push(SndotRow {
                    scenario_id: scenario.id.clone(),
                    strategy,
                    normalized_time: k as f64 / unit,
                    fraction,
                });
            }
        }
    }
    Ok(eval)
}

/// Formats `x` with 12 significant digits, without trailing zeros.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let text = format!("{x:.decimals$}");
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    }
}

pub fn write_metrics_csv<W: io::Write>(eval: &Evaluation, mut out: W) -> io::Result<()> {
    writeln!(out, "scenario_id,strategy,metric,mean,ci95")?;
    for r in &eval.metrics {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.scenario_id,
            r.strategy,
            r.metric,
            format_sig(r.estimate.mean),
            format_sig(r.estimate.ci95)
        )?;
    }
    out.flush()
}

pub fn write_sndot_csv<W: io::Write>(eval: &Evaluation, mut out: W) -> io::Result<()> {
    writeln!(out, "scenario_id,strategy,normalized_time,fraction")?;
    for r in &eval.sndot {
        writeln!(out, "{},{},{},{}", r.scenario_id, r.strategy, format_sig(r.normalized_time), format_sig(r.fraction))?;
    }
    out.flush()
}

/// One entry of a scenario input file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub bps: Vec<u64>,
    pub channels: usize,
    pub neighbors: usize,
    pub deaf_fraction: f64,
    pub trials: usize,
    pub seed: u64,
    pub strategies: Vec<Strategy>,
}

impl ScenarioSpec {
    /// Resolves into a scenario; `index` names it when no id is given.
    pub fn into_scenario(self, index: usize) -> Result<(Scenario, Vec<Strategy>), Error> {
        let scenario = Scenario {
            id: self.id.unwrap_or_else(|| format!("s{index}")),
            bps: BeaconPeriodSet::new(self.bps)?,
            channels: ChannelSet::new(self.channels)?,
            neighbor_count: self.neighbors,
            deaf_fraction: self.deaf_fraction,
            trials: self.trials,
            seed: self.seed,
        };
        scenario.validate()?;
        Ok((scenario, self.strategies))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discovery::discovery_times;
    use crate::schedulers::psv;

    fn bps(p: &[u64]) -> BeaconPeriodSet {
        BeaconPeriodSet::new(p.iter().copied()).unwrap()
    }

    fn ch(n: usize) -> ChannelSet {
        ChannelSet::new(n).unwrap()
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = sample_neighbors(&bps(&[1, 2, 4]), ch(3), 50, 7);
        let b = sample_neighbors(&bps(&[1, 2, 4]), ch(3), 50, 7);
        assert_eq!(a, b);
        assert_ne!(a, sample_neighbors(&bps(&[1, 2, 4]), ch(3), 50, 8));
        for n in &a {
            n.validate(&bps(&[1, 2, 4]), ch(3)).unwrap();
        }
    }

    #[test]
    fn deaf_period_hand_trace() {
        let s = psv(&bps(&[2]), ch(2));
        let early = Neighbor { channel: 1, period: 2, offset: 0, phase: 0.1 };
        let out = run_trial(&s, &[early], 0.25);
        assert_eq!(out.times, vec![None]);
        assert_eq!(out.success_rate, 0.0);
        assert_eq!(out.smdt, None);

        let late = Neighbor { phase: 0.5, ..early };
        let out = run_trial(&s, &[late], 0.25);
        assert_eq!(out.times, vec![Some(2)]);
        assert_eq!(out.switches, 1);
    }

    #[test]
    fn no_deafness_matches_exact_discovery_times() {
        let b = bps(&[1, 2, 3]);
        let s = crate::schedulers::greedy(&b, ch(3), crate::TieBreak::First).unwrap();
        let rep = discovery_times(&s, &b, ch(3));
        let pop = sample_neighbors(&b, ch(3), 200, 3);
        let out = run_trial(&s, &pop, 0.0);
        assert_eq!(out.success_rate, 1.0);
        for (n, t) in pop.iter().zip(&out.times) {
            assert_eq!(*t, rep.time_of(n.channel, n.period, n.offset));
        }
        assert_eq!(out.sndot_at(s.horizon()), 1.0);
    }

    #[test]
    fn estimates() {
        let e = Estimate::from_samples(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(e.mean, 2.0);
        assert!((e.ci95 - 1.96 * (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(Estimate::from_samples(&[5.0]).unwrap().ci95, 0.0);
        assert!(Estimate::from_samples(&[]).is_none());
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_sig(1234.5), "1234.5");
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(1.0), "1");
    }

    #[test]
    fn scenario_spec_parsing() {
        let json = r#"{"bps":[1,2],"channels":2,"neighbors":5,"deaf_fraction":0.1,"trials":3,"seed":9,"strategies":["psv","greedy-stay"]}"#;
        let spec: ScenarioSpec = serde_json::from_str(json).unwrap();
        let (sc, st) = spec.into_scenario(4).unwrap();
        assert_eq!(sc.id, "s4");
        assert_eq!(st, vec![Strategy::Psv, Strategy::Greedy(crate::TieBreak::Stay)]);
        let bad = json.replace("0.1", "1.5");
        let spec: ScenarioSpec = serde_json::from_str(&bad).unwrap();
        assert!(spec.into_scenario(0).is_err());
    }

    #[test]
    fn evaluation_is_deterministic_and_consistent() {
        let sc = Scenario {
            id: "t".into(),
            bps: bps(&[1, 2, 4]),
            channels: ch(2),
            neighbor_count: 10,
            deaf_fraction: 0.2,
            trials: 20,
            seed: 11,
        };
        let grid = vec![(sc, vec![Strategy::Psv, Strategy::ChanTrain])];
        let a = evaluate(&grid, EvalOptions::default()).unwrap();
        let b = evaluate(&grid, EvalOptions::default()).unwrap();
        assert_eq!(a, b);
        for st in [Strategy::Psv, Strategy::ChanTrain] {
            let success = a.get("t", st, "success_rate").unwrap().mean;
            let last = a.sndot.iter().rfind(|r| r.strategy == st).unwrap();
            assert!((last.fraction - success).abs() < 1e-12);
        }
    }

    #[test]
    fn ilp_normalization_is_at_least_one() {
        let sc = Scenario {
            id: "n".into(),
            bps: bps(&[1, 2]),
            channels: ch(2),
            neighbor_count: 4,
            deaf_fraction: 0.0,
            trials: 5,
            seed: 1,
        };
        let grid = vec![(sc, vec![Strategy::Psv])];
        let e = evaluate(&grid, EvalOptions { normalize_ilp: true, node_limit: 100_000 }).unwrap();
        assert!(e.get("n", Strategy::Psv, "smdt").unwrap().mean >= 1.0 - 1e-12);
        assert!(e.get("n", Strategy::Psv, "swdt").unwrap().mean >= 1.0 - 1e-12);
    }
}
