use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite sample at node {index} (s = {s})")]
    Sampling { index: usize, s: f64 },

    #[error("exponent {exponent:.3} exceeds the overflow cap at node {index} (s = {s})")]
    Overflow { index: usize, s: f64, exponent: f64 },

    #[error("bracket search did not find a feasible lambda within {doublings} doublings")]
    NonConvergence { doublings: u32 },

    #[error("quadrature did not reach tolerance on [{a}, {b}] (error estimate {error:e})")]
    Quadrature { a: f64, b: f64, error: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no concentration: W_n(s) is nonpositive on s > 0")]
    NoConcentration,

    #[error("estimated profile has zero derivative norm")]
    EmptyProfile,

    #[error("remainder Orlicz norm did not decrease at level {level}: {previous} -> {current}")]
    Stagnation { level: usize, previous: f64, current: f64 },

    #[error("sequence fails the compactness-at-infinity check (tail mass {tail:e})")]
    NotCompact { tail: f64 },

    #[error("undefined ratio: {0}")]
    Undefined(String),

    #[error("blow-up at t = {time:.6e} (node {node}, u = {value:.3e})")]
    BlowUp { time: f64, node: usize, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
