use thiserror::Error;

/// Errors raised by the algebra, enumeration and harness layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group kind mismatch: cannot combine a permutation with a finite set")]
    KindMismatch,
    #[error("repeated point {0} in cycle")]
    RepeatedPoint(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid composition: {0}")]
    InvalidComposition(String),
    #[error("instance too large: search space estimate {estimate} exceeds guard {guard}")]
    InstanceTooLarge { estimate: u128, guard: u128 },
    #[error("odd half-power of n has no rational trace")]
    OddHalfPower,
    #[error("cannot add multiples of n^(-k/2) with k of different parity")]
    ParityMismatch,
    #[error("scale mismatch: elements built for different n ({0} vs {1})")]
    ScaleMismatch(u64, u64),
    #[error("missing moment for labels {0:?}")]
    MissingMoment(Vec<usize>),
    #[error("not a member: {0}")]
    NotMember(String),
    #[error("partition error: {0}")]
    Partition(String),
    #[error("not enough moments: need degree {needed}, have {available}")]
    NotEnoughMoments { needed: usize, available: usize },
    #[error("linearization mismatch for {family}: expansion gives {expansion}, pairing count gives {count}")]
    LinearizationMismatch {
        family: &'static str,
        expansion: String,
        count: u64,
    },
    #[error("identity check failed: {0}")]
    IdentityFailed(String),
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
