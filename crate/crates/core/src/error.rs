use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid probability {name} = {value}: must lie in [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),

    #[error("degenerate channel: p_d = 0 collapses every region to the origin")]
    DegenerateChannel,

    #[error("inclusion violated: inner vertex ({r1}, {r2}) lies outside the outer region")]
    InclusionViolated { r1: f64, r2: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown variable `{0}`")]
    VariableUnknown(String),

    #[error("block too large: n = {n} exceeds the enumeration bound {max}")]
    BlockTooLarge { n: usize, max: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("internal consistency: {0}")]
    Consistency(String),
}
