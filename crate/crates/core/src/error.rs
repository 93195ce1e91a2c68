use thiserror::Error;

use crate::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("instance must contain at least one job")]
    EmptyInstance,
    #[error("job sizes must be positive, got {0}")]
    NonPositiveSize(i64),
    #[error("schedule has no jobs")]
    EmptySchedule,
    #[error("negative start time {start} for job {job}")]
    NegativeStart { job: usize, start: Rational },
    #[error("jobs {0} and {1} share a start time")]
    CoincidentStarts(usize, usize),
    #[error("schedule is infeasible: {} violating pair(s), first {:?}", .0.len(), .0.first())]
    Infeasible(Vec<(usize, usize)>),
    #[error("instance has {n} jobs, limit is {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("search horizon {horizon} exceeds limit {limit}")]
    HorizonTooLarge { horizon: u64, limit: u64 },
    #[error("invalid epsilon {0}: must be a positive rational with denominator at most 64")]
    InvalidEpsilon(String),
    #[error("dynamic program exceeded its state budget ({states} states, budget {budget})")]
    BudgetExceeded { states: usize, budget: usize },
    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),
    #[error("invalid 3DM instance: {0}")]
    InvalidThreeDm(String),
    #[error("M = {m} is below the minimum {min} = ceil(5D/4)")]
    MultiplierTooSmall { m: u64, min: u64 },
    #[error("invalid matching: {0}")]
    InvalidMatching(String),
    #[error("makespan {makespan} exceeds the target {target}")]
    NotTight { makespan: Rational, target: u64 },
    #[error("cannot decode block {block}: {reason}")]
    Decode { block: usize, reason: String },
    #[error("schedule has {jobs} jobs but {demands} demands were given")]
    DemandLength { jobs: usize, demands: usize },
    #[error("demand {demand} of job {job} is outside [1, {size}]")]
    DemandOutOfRange {
        job: usize,
        demand: Rational,
        size: u64,
    },
    #[error("invalid generator parameters: {0}")]
    Generator(String),
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("malformed input: {0}")]
    Format(String),
}
