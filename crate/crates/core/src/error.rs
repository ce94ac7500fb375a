use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported order {order} for {function}")]
    UnsupportedOrder { function: &'static str, order: u32 },

    #[error("argument {x} outside the domain of {function}")]
    Domain { function: &'static str, x: f64 },

    #[error("invalid quadrature specification: {0}")]
    InvalidQuadrature(String),

    #[error("quadrature failed to converge after {subdivisions} subdivisions (estimate {estimate}, error {error})")]
    QuadratureDiverged {
        subdivisions: usize,
        estimate: f64,
        error: f64,
    },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("index {index} outside [0, {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("pair geometry requires distinct sites, got {0} twice")]
    SamePair(usize),

    #[error("sites {0} and {1} coincide; coherent coupling diverges")]
    CoincidentSites(usize, usize),

    #[error("eigen-solver did not converge after {iterations} iterations (residual {residual:e})")]
    EigenNotConverged { iterations: usize, residual: f64 },

    #[error("eigenvector matrix is singular or ill-conditioned (condition number {condition:e}, limit {limit:e})")]
    IllConditioned { condition: f64, limit: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),

    #[error("intensity did not fall to 1/e within the time grid (last t = {last_time}, intensity {last_intensity})")]
    Censored { last_time: f64, last_intensity: f64 },

    #[error("ODE stepper failed: {0}")]
    Stepper(String),

    #[error("phase index m = {m} outside [0, {n}]")]
    InvalidPhaseIndex { m: usize, n: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
