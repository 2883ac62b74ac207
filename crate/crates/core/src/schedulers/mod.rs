//! Constructive listening-schedule generators.

mod coverage;
mod greedy;
mod opt_b2;
mod recursive;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use greedy::{chan_train, greedy, greedy_by, greedy_horizon_cap, Candidates, TieBreak};
pub use opt_b2::opt_b2;
pub use recursive::{extend_recursive, psv, recursive_f3, ScheduleMatrix};

use crate::bps::{BeaconPeriodSet, ChannelSet};
use crate::schedule::Schedule;
use crate::Error;

/// A named schedule generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Psv,
    Greedy(TieBreak),
    ChanTrain,
    OptB2,
    RecursiveF3,
}

impl Strategy {
    pub const ALL: [Strategy; 7] = [
        Strategy::Psv,
        Strategy::Greedy(TieBreak::First),
        Strategy::Greedy(TieBreak::Stay),
        Strategy::Greedy(TieBreak::Lookahead),
        Strategy::ChanTrain,
        Strategy::OptB2,
        Strategy::RecursiveF3,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Psv => "psv",
            Strategy::Greedy(TieBreak::First) => "greedy-first",
            Strategy::Greedy(TieBreak::Stay) => "greedy-stay",
            Strategy::Greedy(TieBreak::Lookahead) => "greedy-lookahead",
            Strategy::ChanTrain => "chantrain",
            Strategy::OptB2 => "optb2",
            Strategy::RecursiveF3 => "recursive-f3",
        }
    }

    /// Generates the schedule for `bps` and `channels`.
    pub fn generate(&self, bps: &BeaconPeriodSet, channels: ChannelSet) -> Result<Schedule, Error> {
        match *self {
            Strategy::Psv => Ok(psv(bps, channels)),
            Strategy::Greedy(tie) => greedy(bps, channels, tie),
            Strategy::ChanTrain => chan_train(bps, channels),
            Strategy::OptB2 => opt_b2(bps, channels),
            Strategy::RecursiveF3 => recursive_f3(bps, channels),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Strategy::ALL.into_iter().find(|st| st.name() == s).ok_or_else(|| Error::UnknownStrategy(s.to_string()))
    }
}

impl Serialize for Strategy {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Strategy {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
