use thiserror::Error;

/// Errors surfaced by domain construction, lattice building and simulation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point {0:?} is outside the domain")]
    PointOutsideDomain(Vec<f64>),

    #[error("anchor grid vertex at level {k} lies outside the domain")]
    AnchorOutsideDomain { k: u32 },

    #[error("level {k} too coarse: anchored lattice component has a single vertex")]
    LevelTooCoarse { k: u32 },

    #[error("snowflake depth {depth} exceeds maximum {max}")]
    DepthOverLimit { depth: u32, max: u32 },

    #[error("comb schedule violates the strip-area bound at level {k}: 4*eps*(2^k+1) = {lhs} >= {rhs}")]
    CombScheduleViolation { k: u32, lhs: f64, rhs: f64 },

    #[error("invalid domain descriptor: {0}")]
    BadDescriptor(String),

    #[error("rejection budget of {budget} attempts exhausted at {point:?} (point too close to the boundary for this budget)")]
    RejectionBudgetExhausted { point: Vec<f64>, budget: u64 },

    #[error("kernel is not reversible within tolerance: relative defect {defect}")]
    NotReversible { defect: f64 },

    #[error("time {t} exceeds the trajectory horizon {horizon}")]
    TimeOutOfRange { t: f64, horizon: f64 },

    #[error("invalid configuration: {0}")]
    BadConfig(String),

    #[error("unknown statistic '{0}'")]
    UnknownStatistic(String),

    #[error("unknown acceptance suite '{0}'")]
    UnknownSuite(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
