use crate::bps::{BeaconPeriodSet, ChannelSet};
use crate::discovery::{ConfigSpace, Rational};
use crate::sim::Neighbor;
use crate::Error;

/// Something that must be discovered: a configuration (MDTOPT) or a concrete
/// neighbor (sample objectives).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entity {
    /// Stable name used in exported models (`c0b2d1`, `n7`).
    pub id: String,
    pub channel: usize,
    pub period: u64,
    pub offset: u64,
    /// Integer objective weight; the entity's coefficient is `weight · scale`.
    pub weight: u64,
}

impl Entity {
    /// Number of beacon occurrences `i` with `offset + i·period <= t_max`.
    pub fn occurrences(&self, t_max: u64) -> u64 {
        if self.offset > t_max {
            0
        } else {
            (t_max - self.offset) / self.period + 1
        }
    }

    pub fn beacon_slot(&self, occurrence: u64) -> u64 {
        self.offset + occurrence * self.period
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ObjectiveKind {
    /// `scale · Σ weight · T`: MDT for configurations, SMDT for neighbors.
    MeanDiscovery,
    /// `z ≥ T` for every entity; minimize `z` (SWDT).
    Makespan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// Entity `entity` is discovered at its `occurrence`-th beacon.
    Y { entity: usize, occurrence: u64 },
    /// Channel `channel` is scanned in `slot`.
    H { channel: usize, slot: u64 },
    /// Makespan.
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(Var, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Binary program over `y` (entity discovered at a given beacon) and `h`
/// (channel scanned in a slot) variables:
///
/// - each entity is discovered at exactly one of its beacons up to `t_max`;
/// - `y ≤ h` for the channel and slot of that beacon;
/// - at most one channel per slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlpModel {
    pub name: String,
    pub kind: ObjectiveKind,
    pub entities: Vec<Entity>,
    pub channels: usize,
    pub t_max: u64,
    /// Multiplier turning integer weights into objective coefficients.
    pub scale: Rational,
    pub objective: Vec<(Var, Rational)>,
    pub constraints: Vec<Constraint>,
}

impl IlpModel {
    fn assemble(
        name: &str,
        kind: ObjectiveKind,
        entities: Vec<Entity>,
        channels: usize,
        t_max: u64,
        scale: Rational,
    ) -> Result<Self, Error> {
        if let Some(e) = entities.iter().find(|e| e.occurrences(t_max) == 0) {
            return Err(Error::HorizonTooShort { t_max, entity: e.id.clone() });
        }
        let one = Rational::from_integer(1);
        let mut objective = Vec::new();
        let mut constraints = Vec::new();
        for (ei, e) in entities.iter().enumerate() {
            let ys: Vec<Var> = (0..e.occurrences(t_max)).map(|i| Var::Y { entity: ei, occurrence: i }).collect();
            constraints.push(Constraint {
                name: format!("once_{}", e.id),
                terms: ys.iter().map(|&v| (v, one)).collect(),
                relation: Relation::Eq,
                rhs: one,
            });
            for (i, &y) in ys.iter().enumerate() {
                let slot = e.beacon_slot(i as u64);
                constraints.push(Constraint {
                    name: format!("scan_{}_{}", i, e.id),
                    terms: vec![(y, one), (Var::H { channel: e.channel, slot }, -one)],
                    relation: Relation::Le,
                    rhs: Rational::from_integer(0),
                });
                let slot_r = Rational::from_integer(slot as i128);
                match kind {
                    ObjectiveKind::MeanDiscovery => {
                        if slot > 0 {
                            let coeff = scale * Rational::from_integer(e.weight as i128) * slot_r;
                            objective.push((y, coeff));
                        }
                    }
                    ObjectiveKind::Makespan => {
                        if slot > 0 {
                            constraints.push(Constraint {
                                name: format!("span_{}_{}", i, e.id),
                                terms: vec![(y, slot_r), (Var::Z, -one)],
                                relation: Relation::Le,
                                rhs: Rational::from_integer(0),
                            });
                        }
                    }
                }
            }
        }
        for t in 0..=t_max {
            constraints.push(Constraint {
                name: format!("slot_{t}"),
                terms: (0..channels).map(|c| (Var::H { channel: c, slot: t }, one)).collect(),
                relation: Relation::Le,
                rhs: one,
            });
        }
        if kind == ObjectiveKind::Makespan {
            objective.push((Var::Z, one));
        }
        Ok(Self { name: name.to_string(), kind, entities, channels, t_max, scale, objective, constraints })
    }

    /// All `y` variables, entity by entity.
    pub fn y_vars(&self) -> Vec<Var> {
        self.entities
            .iter()
            .enumerate()
            .flat_map(|(ei, e)| (0..e.occurrences(self.t_max)).map(move |i| Var::Y { entity: ei, occurrence: i }))
            .collect()
    }

    /// All `h` variables, slot-major.
    pub fn h_vars(&self) -> Vec<Var> {
        (0..=self.t_max).flat_map(|t| (0..self.channels).map(move |c| Var::H { channel: c, slot: t })).collect()
    }

    pub fn has_makespan(&self) -> bool {
        self.kind == ObjectiveKind::Makespan
    }

    /// Name of a variable in exported models.
    pub fn var_name(&self, var: Var) -> String {
        match var {
            Var::Y { entity, occurrence } => format!("y_{}_{}", occurrence, self.entities[entity].id),
            Var::H { channel, slot } => format!("h_{channel}_{slot}"),
            Var::Z => "z".to_string(),
        }
    }
}

/// Horizon rule for the sample models.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HorizonRule {
    /// `min(1000·max(B)·|C| − 1, LCM(B)·|C| − 1)`.
    #[default]
    Default,
    Fixed(u64),
}

impl HorizonRule {
    pub fn resolve(self, bps: &BeaconPeriodSet, channels: ChannelSet) -> u64 {
        match self {
            HorizonRule::Default => {
                let n = channels.count() as u64;
                (1000 * bps.max() * n - 1).min(bps.lcm() * n - 1)
            }
            HorizonRule::Fixed(t) => t,
        }
    }
}

/// Default MDTOPT horizon `LCM(B)·|C| − 1`; no MDT-optimal schedule needs more.
pub fn default_mdtopt_horizon(bps: &BeaconPeriodSet, channels: ChannelSet) -> u64 {
    bps.lcm() * channels.count() as u64 - 1
}

/// MDTOPT over the full configuration space with uniform probabilities.
pub fn build_mdtopt(bps: &BeaconPeriodSet, channels: ChannelSet, t_max: Option<u64>) -> Result<IlpModel, Error> {
    let space = ConfigSpace::new(bps, channels);
    let entities = space
        .configurations()
        .into_iter()
        .map(|k| {
            let idx = bps.index_of(k.period).expect("period from the set");
            Entity {
                id: format!("c{}b{}d{}", k.channel, k.period, k.offset),
                channel: k.channel,
                period: k.period,
                offset: k.offset,
                weight: space.weight(idx),
            }
        })
        .collect();
    let t_max = t_max.unwrap_or_else(|| default_mdtopt_horizon(bps, channels));
    let scale = space.probability_of(1);
    IlpModel::assemble("mdtopt", ObjectiveKind::MeanDiscovery, entities, channels.count(), t_max, scale)
}

fn neighbor_entities(
    neighbors: &[Neighbor],
    bps: &BeaconPeriodSet,
    channels: ChannelSet,
) -> Result<Vec<Entity>, Error> {
    if neighbors.is_empty() {
        return Err(Error::NoNeighbors);
    }
    neighbors
        .iter()
        .enumerate()
        .map(|(i, n)| {
            n.validate(bps, channels).map_err(|reason| Error::InvalidNeighbor { index: i, reason })?;
            Ok(Entity { id: format!("n{i}"), channel: n.channel, period: n.period, offset: n.offset, weight: 1 })
        })
        .collect()
}

/// Minimizes the sample mean discovery time of a concrete neighbor population.
pub fn build_sample_mdt(
    neighbors: &[Neighbor],
    bps: &BeaconPeriodSet,
    channels: ChannelSet,
    horizon: HorizonRule,
) -> Result<IlpModel, Error> {
    let entities = neighbor_entities(neighbors, bps, channels)?;
    let scale = Rational::new(1, entities.len() as i128);
    let t_max = horizon.resolve(bps, channels);
    IlpModel::assemble("sample_mdt", ObjectiveKind::MeanDiscovery, entities, channels.count(), t_max, scale)
}

/// Minimizes the sample worst-case discovery time of a concrete neighbor population.
pub fn build_sample_wdt(
    neighbors: &[Neighbor],
    bps: &BeaconPeriodSet,
    channels: ChannelSet,
    horizon: HorizonRule,
) -> Result<IlpModel, Error> {
    let entities = neighbor_entities(neighbors, bps, channels)?;
    let t_max = horizon.resolve(bps, channels);
    IlpModel::assemble(
        "sample_wdt",
        ObjectiveKind::Makespan,
        entities,
        channels.count(),
        t_max,
        Rational::from_integer(1),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn bps(p: &[u64]) -> BeaconPeriodSet {
        BeaconPeriodSet::new(p.iter().copied()).unwrap()
    }

    fn ch(n: usize) -> ChannelSet {
        ChannelSet::new(n).unwrap()
    }

    #[test]
    fn default_horizon_is_lcm_times_channels_minus_one() {
        let m = build_mdtopt(&bps(&[1, 2, 3]), ch(3), None).unwrap();
        assert_eq!(m.t_max, 17);
        assert_eq!(m.entities.len(), 18);
        assert_eq!(m.h_vars().len(), 18 * 3);
    }

    #[test]
    fn every_y_in_one_exactly_one_and_one_link() {
        let m = build_mdtopt(&bps(&[2, 3]), ch(2), None).unwrap();
        let mut once: HashMap<Var, usize> = HashMap::new();
        let mut link: HashMap<Var, usize> = HashMap::new();
        for c in &m.constraints {
            for (v, _) in &c.terms {
                if let Var::Y { .. } = v {
                    match c.relation {
                        Relation::Eq => *once.entry(*v).or_default() += 1,
                        Relation::Le => *link.entry(*v).or_default() += 1,
                    }
                }
            }
        }
        for y in m.y_vars() {
            assert_eq!(once.get(&y), Some(&1));
            assert_eq!(link.get(&y), Some(&1));
        }
    }

    #[test]
    fn occurrence_ranges() {
        let m = build_mdtopt(&bps(&[1, 2, 4, 5]), ch(2), Some(9)).unwrap();
        for e in &m.entities {
            assert_eq!(e.occurrences(9), (9 - e.offset) / e.period + 1);
        }
    }

    #[test]
    fn short_horizon_is_flagged() {
        let r = build_mdtopt(&bps(&[4]), ch(1), Some(2));
        assert!(matches!(r, Err(Error::HorizonTooShort { t_max: 2, .. })));
    }

    #[test]
    fn sample_horizon_rule() {
        assert_eq!(HorizonRule::Default.resolve(&bps(&[2, 3]), ch(2)), 11);
        assert_eq!(HorizonRule::Default.resolve(&bps(&[1, 1000, 999]), ch(1)), 998_999);
        assert_eq!(HorizonRule::Default.resolve(&bps(&[999, 1000, 1001]), ch(1)), 1_000_999);
        assert!(matches!(build_sample_mdt(&[], &bps(&[2]), ch(1), HorizonRule::Default), Err(Error::NoNeighbors)));
    }

    #[test]
    fn makespan_model_has_z() {
        let n = [Neighbor { channel: 0, period: 2, offset: 1, phase: 0.0 }];
        let m = build_sample_wdt(&n, &bps(&[2]), ch(1), HorizonRule::Default).unwrap();
        assert_eq!(m.objective, vec![(Var::Z, Rational::from_integer(1))]);
        assert!(m.constraints.iter().any(|c| c.name.starts_with("span_")));
    }
}
