use thiserror::Error;

/// Errors raised by the discovery toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("beacon period set is empty")]
    EmptyPeriodSet,
    #[error("beacon periods must be positive")]
    ZeroPeriod,
    #[error("LCM of the beacon periods overflows 64 bits")]
    LcmOverflow,
    #[error("channel count must be at least 1")]
    NoChannels,
    #[error("slot {0} is scanned twice")]
    SlotConflict(u64),
    #[error("channel {channel} is out of range for {count} channels")]
    ChannelOutOfRange { channel: usize, count: usize },
    #[error("expected exactly two beacon periods, got {0}")]
    NotTwoPeriods(usize),
    #[error("beacon period set {0} is not a divisibility chain")]
    NotDivisibilityChain(String),
    #[error("target period {target} is not a multiple of {period}")]
    NotMultiple { period: u64, target: u64 },
    #[error("schedule matrix is invalid: {0}")]
    InvalidMatrix(String),
    #[error("no recursive schedule found for {0}")]
    NoRecursiveSchedule(String),
    #[error("schedule did not complete within {0} slots")]
    HorizonExceeded(u64),
    #[error("neighbor list is empty")]
    NoNeighbors,
    #[error("invalid neighbor {index}: {reason}")]
    InvalidNeighbor { index: usize, reason: String },
    #[error("horizon t_max = {t_max} is too short: entity {entity} has no beacon at or before it")]
    HorizonTooShort { t_max: u64, entity: String },
    #[error("search exceeds the configured ceiling: {0}")]
    CeilingExceeded(String),
    #[error("unknown strategy '{0}'")]
    UnknownStrategy(String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("solver did not prove optimality: {0}")]
    NotSolved(String),
}
