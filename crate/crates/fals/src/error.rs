use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A size or depth limit would be exceeded.
    #[error("capacity exceeded: {what} = {requested} is above the limit {limit}")]
    Capacity {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    /// Motif maps do not form a connected curve generator.
    #[error("invalid generator geometry: {0}")]
    Geometry(String),

    /// The Moran equation has no solution in the admissible range.
    #[error("no similarity dimension in [1, 2]: {0}")]
    Dimension(String),

    /// A parameter lies outside the curve's parameter domain.
    #[error("parameter {value} outside domain [{lo}, {hi}]")]
    Domain { value: f64, lo: f64, hi: f64 },

    /// A mass value lies outside the staircase range.
    #[error("mass {value} outside staircase range [{lo}, {hi}]")]
    Range { value: f64, lo: f64, hi: f64 },

    /// Invalid argument combination.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Index out of bounds for a trajectory or snapshot.
    #[error("index {index} out of bounds (len {len})")]
    Index { index: usize, len: usize },

    /// The mass increment vanishes, so a difference quotient is undefined.
    #[error("zero mass increment: {0}")]
    Singularity(String),

    /// Iterative refinement failed to converge; carries the last two iterates.
    #[error("difference quotient did not converge: last two iterates {last} and {prev}")]
    Tolerance { last: f64, prev: f64 },

    /// Not enough samples for the requested statistic.
    #[error("sample size {got} below required minimum {needed}")]
    SampleSize { needed: usize, got: usize },

    /// Input data is unusable (NaN, infinity, ...).
    #[error("bad data: {0}")]
    Data(String),

    /// Fractional moment of order q does not exist for stability index mu.
    #[error("moment of order q = {q} diverges for stability index mu = {mu}")]
    DivergentMoment { q: f64, mu: f64 },

    /// A distribution parameter combination is degenerate.
    #[error("degenerate distribution: {0}")]
    Degenerate(String),

    /// Operation requires state that has not been computed.
    #[error("invalid state: {0}")]
    State(String),

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed ensemble file.
    #[error("bad ensemble file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
