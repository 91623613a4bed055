use thiserror::Error;

/// Errors raised by chain construction, design, analysis and simulation.
///
/// Site indices carried in error payloads are 1-based.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("chain needs at least 2 sites, got {0}")]
    TooFewSites(usize),

    #[error("expected {expected} {what}, got {actual}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("coupling J_{site} = {value} must be strictly positive and finite")]
    NonPositiveCoupling { site: usize, value: f64 },

    #[error("field B_{site} = {value} is not finite")]
    NonFiniteField { site: usize, value: f64 },

    #[error("site {site} outside 1..={n}")]
    SiteOutOfRange { site: usize, n: usize },

    #[error("eigensolver did not converge for eigenvalue {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("eigenvalues {first} and {second} are degenerate (gap {gap:e} below {threshold:e})")]
    DegenerateSpectrum {
        first: usize,
        second: usize,
        gap: f64,
        threshold: f64,
    },

    #[error("state has {actual} amplitudes, chain has {expected} sites")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("state norm {norm} differs from 1 by more than {tolerance:e}")]
    NotNormalized { norm: f64, tolerance: f64 },

    #[error("time {0} is not finite")]
    NonFiniteTime(f64),

    #[error("{0}")]
    InvalidParameter(String),

    #[error("chain is not mirror symmetric: {0}")]
    NotMirrorSymmetric(String),

    #[error("spectrum is not strictly descending at positions {first} and {second} ({upper} <= {lower})")]
    NotDescending {
        first: usize,
        second: usize,
        upper: f64,
        lower: f64,
    },

    #[error("reconstruction produced coupling J_{site} = {value}; spectrum is not realizable")]
    Unrealizable { site: usize, value: f64 },

    #[error("reconstructed spectrum misses its target by {residual:e} (allowed {bound:e})")]
    ReconstructionFailed { residual: f64, bound: f64 },

    #[error("state has weight {weight:e} outside the encoding sites 1..={sites}")]
    SupportViolation { weight: f64, sites: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
