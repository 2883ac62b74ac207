//! Passive multi-channel neighbor discovery.
//!
//! A discoverer listens on one channel per time slot and overhears periodic
//! beacons of its neighbors. This crate builds listening schedules
//! ([`schedulers`]), evaluates them exactly ([`discovery`]), computes
//! MDT-optimal schedules by branch-and-bound ([`optimal`]), certifies results
//! against brute force ([`oracle`]) and simulates discovery with channel-switch
//! deaf periods ([`sim`]).

pub mod bps;
pub mod checks;
pub mod discovery;
mod error;
pub mod optimal;
pub mod oracle;
pub mod schedule;
pub mod schedulers;
pub mod sim;

pub use bps::{classify_family, normalize_bp_set, BeaconPeriodSet, ChannelSet, Family};
pub use discovery::{
    configuration_space, discovery_times, optimal_wdt, slot_gains, Configuration, DiscoveryReport, Rational,
};
pub use error::Error;
pub use schedule::{channel_switch_count, Schedule};
pub use schedulers::{Strategy, TieBreak};
