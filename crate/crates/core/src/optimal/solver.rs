//! Exact depth-first branch-and-bound for the discovery programs.
//!
//! The search assigns slots in ascending order. Scanning a channel never delays
//! any discovery, so a slot is left idle only when no channel would discover
//! anything in it; otherwise only channels with positive gain are branched on.
//! Channels whose pending entities are identical up to renaming are explored
//! once.

use serde::Serialize;

use super::model::{IlpModel, ObjectiveKind};
use crate::discovery::{format_ratio, Rational};
use crate::schedule::Schedule;

/// Default node limit for [`solve_exact`] callers that do not care.
pub const DEFAULT_NODE_LIMIT: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    BudgetExceeded,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub status: SolveStatus,
    /// Objective of the returned schedule; `None` when no feasible schedule was found.
    pub objective: Option<Rational>,
    pub schedule: Option<Schedule>,
    pub nodes: u64,
}

impl Serialize for Solution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Solution", 5)?;
        st.serialize_field("objective", &self.objective.as_ref().map(format_ratio))?;
        st.serialize_field(
            "objective_decimal",
            &self.objective.as_ref().map(|r| crate::discovery::format_decimal(r, 12)),
        )?;
        st.serialize_field("status", &self.status)?;
        st.serialize_field("nodes", &self.nodes)?;
        st.serialize_field("schedule", &self.schedule)?;
        st.end()
    }
}

/// Flattened model data for the search.
struct Problem {
    kind: ObjectiveKind,
    channels: usize,
    t_max: u64,
    period: Vec<u64>,
    offset: Vec<u64>,
    channel: Vec<usize>,
    weight: Vec<u64>,
    /// `buckets[c][k][d]`: entities on channel `c` with period `periods[k]` and offset `d`.
    periods: Vec<u64>,
    buckets: Vec<Vec<Vec<Vec<usize>>>>,
    max_period: u64,
    /// Hash contribution of each entity to its channel signature.
    sig_part: Vec<u64>,
}

impl Problem {
    fn new(model: &IlpModel) -> Self {
        let mut periods: Vec<u64> = model.entities.iter().map(|e| e.period).collect();
        periods.sort_unstable();
        periods.dedup();
        let mut buckets: Vec<Vec<Vec<Vec<usize>>>> =
            (0..model.channels).map(|_| periods.iter().map(|&b| vec![Vec::new(); b as usize]).collect()).collect();
        for (i, e) in model.entities.iter().enumerate() {
            let k = periods.binary_search(&e.period).expect("collected above");
            buckets[e.channel][k][e.offset as usize].push(i);
        }
        let sig_part = model
            .entities
            .iter()
            .map(|e| splitmix(e.period.wrapping_mul(0x9E37_79B9) ^ (e.offset << 20) ^ (e.weight << 40)))
            .collect();
        Self {
            kind: model.kind,
            channels: model.channels,
            t_max: model.t_max,
            period: model.entities.iter().map(|e| e.period).collect(),
            offset: model.entities.iter().map(|e| e.offset).collect(),
            channel: model.entities.iter().map(|e| e.channel).collect(),
            weight: model.entities.iter().map(|e| e.weight).collect(),
            max_period: periods.last().copied().unwrap_or(1),
            periods,
            buckets,
            sig_part,
        }
    }

    fn len(&self) -> usize {
        self.period.len()
    }

    /// Entities on `channel` beaconing in `slot`.
    fn at(&self, channel: usize, slot: u64) -> impl Iterator<Item = usize> + '_ {
        self.periods
            .iter()
            .enumerate()
            .flat_map(move |(k, &b)| self.buckets[channel][k][(slot % b) as usize].iter().copied())
    }

    fn earliest(&self, e: usize, t: u64) -> u64 {
        let b = self.period[e];
        t + (self.offset[e] + b - t % b) % b
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Search state shared across the recursion.
struct Search<'a> {
    p: &'a Problem,
    found: Vec<bool>,
    remaining: usize,
    signature: Vec<u64>,
    picks: Vec<Option<usize>>,
    /// Sum of `weight · T` over discovered entities.
    cost: u128,
    /// Largest discovery slot so far.
    span: u64,
    best: Option<(u128, Vec<Option<usize>>)>,
    nodes: u64,
    limit: u64,
    exhausted: bool,
    /// Scratch for the bound: `delay[e - t][c]`.
    delay: Vec<u128>,
    hard: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(p: &'a Problem, limit: u64) -> Self {
        let mut signature = vec![0u64; p.channels];
        for e in 0..p.len() {
            signature[p.channel[e]] = signature[p.channel[e]].wrapping_add(p.sig_part[e]);
        }
        let width = p.max_period as usize * p.channels;
        Self {
            p,
            found: vec![false; p.len()],
            remaining: p.len(),
            signature,
            picks: Vec::new(),
            cost: 0,
            span: 0,
            best: None,
            nodes: 0,
            limit,
            exhausted: false,
            delay: vec![0; width],
            hard: vec![false; width],
        }
    }

    fn score(&self) -> u128 {
        match self.p.kind {
            ObjectiveKind::MeanDiscovery => self.cost,
            ObjectiveKind::Makespan => self.span as u128,
        }
    }

    /// Lower bound on the final score of any completion from slot `t`, or
    /// `None` when no completion within `t_max` exists.
    ///
    /// Every pending entity is discovered no earlier than its next beacon `e`.
    /// Of the channels holding entities whose next beacon is `e`, only one can
    /// be scanned at `e`; the others wait at least one more period.
    fn bound(&mut self, t: u64) -> Option<u128> {
        let p = self.p;
        let n = p.channels;
        let width = p.max_period as usize;
        match p.kind {
            ObjectiveKind::Makespan => {
                let mut span = self.span;
                for e in 0..p.len() {
                    if !self.found[e] {
                        let first = p.earliest(e, t);
                        if first > p.t_max {
                            return None;
                        }
                        span = span.max(first);
                    }
                }
                Some(span as u128)
            }
            ObjectiveKind::MeanDiscovery => {
                self.delay[..width * n].fill(0);
                self.hard[..width * n].fill(false);
                let mut base = self.cost;
                for e in 0..p.len() {
                    if self.found[e] {
                        continue;
                    }
                    let first = p.earliest(e, t);
                    if first > p.t_max {
                        return None;
                    }
                    let w = p.weight[e] as u128;
                    base += w * first as u128;
                    let cell = (first - t) as usize * n + p.channel[e];
                    if first + p.period[e] > p.t_max {
                        self.hard[cell] = true;
                    } else {
                        self.delay[cell] += w * p.period[e] as u128;
                    }
                }
                for row in 0..width {
                    let cells = row * n..(row + 1) * n;
                    let hard: Vec<usize> = cells.clone().filter(|&i| self.hard[i]).collect();
                    let total: u128 = self.delay[cells.clone()].iter().sum();
                    let keep = match hard.len() {
                        0 => self.delay[cells].iter().copied().max().unwrap_or(0),
                        1 => self.delay[hard[0]],
                        _ => return None,
                    };
                    base += total - keep;
                }
                Some(base)
            }
        }
    }

    fn gain(&self, c: usize, t: u64) -> u128 {
        self.p.at(c, t).filter(|&e| !self.found[e]).map(|e| self.p.weight[e] as u128).sum()
    }

    /// Exact check that two channels have the same pending entities up to renaming.
    fn same_pending(&self, a: usize, b: usize) -> bool {
        let collect = |c: usize| {
            let mut v: Vec<(u64, u64, u64)> = (0..self.p.len())
                .filter(|&e| self.p.channel[e] == c && !self.found[e])
                .map(|e| (self.p.period[e], self.p.offset[e], self.p.weight[e]))
                .collect();
            v.sort_unstable();
            v
        };
        collect(a) == collect(b)
    }

    fn apply(&mut self, c: usize, t: u64) -> Vec<usize> {
        let hit: Vec<usize> = self.p.at(c, t).filter(|&e| !self.found[e]).collect();
        for &e in &hit {
            self.found[e] = true;
            self.remaining -= 1;
            self.cost += self.p.weight[e] as u128 * t as u128;
            self.signature[c] = self.signature[c].wrapping_sub(self.p.sig_part[e]);
        }
        hit
    }

    fn undo(&mut self, c: usize, t: u64, hit: &[usize]) {
        for &e in hit {
            self.found[e] = false;
            self.remaining += 1;
            self.cost -= self.p.weight[e] as u128 * t as u128;
            self.signature[c] = self.signature[c].wrapping_add(self.p.sig_part[e]);
        }
    }

    fn dfs(&mut self, t: u64) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            self.exhausted = true;
            return;
        }
        if self.remaining == 0 {
            let score = self.score();
            if self.best.as_ref().is_none_or(|(b, _)| score < *b) {
                self.best = Some((score, self.picks.clone()));
            }
            return;
        }
        if t > self.p.t_max {
            return;
        }
        let Some(bound) = self.bound(t) else { return };
        if self.best.as_ref().is_some_and(|(b, _)| bound >= *b) {
            return;
        }

        let mut options: Vec<(u128, usize)> =
            (0..self.p.channels).map(|c| (self.gain(c, t), c)).filter(|&(g, _)| g > 0).collect();
        if options.is_empty() {
            self.picks.push(None);
            self.dfs(t + 1);
            self.picks.pop();
            return;
        }
        options.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut tried: Vec<usize> = Vec::new();
        for (_, c) in options {
            if tried.iter().any(|&o| self.signature[o] == self.signature[c] && self.same_pending(o, c)) {
                continue;
            }
            tried.push(c);
            let hit = self.apply(c, t);
            let span = self.span;
            self.span = self.span.max(t);
            self.picks.push(Some(c));
            self.dfs(t + 1);
            self.picks.pop();
            self.span = span;
            self.undo(c, t, &hit);
            if self.exhausted {
                return;
            }
        }
    }
}

fn to_objective(model: &IlpModel, score: u128) -> Rational {
    match model.kind {
        ObjectiveKind::MeanDiscovery => model.scale * Rational::from_integer(score as i128),
        ObjectiveKind::Makespan => Rational::from_integer(score as i128),
    }
}

fn picks_to_schedule(picks: &[Option<usize>]) -> Schedule {
    let mut s = Schedule::new();
    for (t, c) in picks.iter().enumerate() {
        if let Some(c) = c {
            s.scan(t as u64, *c);
        }
    }
    s
}

/// Solves a model built by [`build_mdtopt`](super::build_mdtopt),
/// [`build_sample_mdt`](super::build_sample_mdt) or
/// [`build_sample_wdt`](super::build_sample_wdt) exactly, visiting at most
/// `node_limit` search nodes.
pub fn solve_exact(model: &IlpModel, node_limit: u64) -> Solution {
    let problem = Problem::new(model);
    let mut search = Search::new(&problem, node_limit);
    search.dfs(0);
    let status = if search.exhausted {
        SolveStatus::BudgetExceeded
    } else if search.best.is_some() {
        SolveStatus::Optimal
    } else {
        SolveStatus::Infeasible
    };
    let nodes = search.nodes.min(node_limit);
    match search.best {
        Some((score, picks)) => Solution {
            status,
            objective: Some(to_objective(model, score)),
            schedule: Some(picks_to_schedule(&picks)),
            nodes,
        },
        None => Solution { status, objective: None, schedule: None, nodes },
    }
}

/// The search's lower bound after the slots of `prefix` (all slots below
/// `prefix.horizon()`) have been fixed. `None` means the prefix cannot be
/// completed within `t_max`.
pub fn lower_bound_after(model: &IlpModel, prefix: &Schedule) -> Option<Rational> {
    let problem = Problem::new(model);
    let mut search = Search::new(&problem, u64::MAX);
    for (slot, c) in prefix.scans() {
        if c < problem.channels && !search.apply(c, slot).is_empty() {
            search.span = search.span.max(slot);
        }
    }
    if search.remaining == 0 {
        return Some(to_objective(model, search.score()));
    }
    let t = prefix.horizon();
    if t > model.t_max {
        return None;
    }
    search.bound(t).map(|b| to_objective(model, b))
}
