//! Error type shared by all phasegrid operations.

use thiserror::Error;

/// Errors produced by grid construction, transforms and lattice analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("displacement ({q}, {p}) is not grid-commensurate (dq = {dq}, dp = {dp})")]
    NonCommensurateDisplacement { q: f64, p: f64, dq: f64, dp: f64 },

    #[error("sample offset {offset} is not a multiple of dq = {dq}")]
    NonCommensurateOffset { offset: f64, dq: f64 },

    #[error("grids do not match: {0}")]
    GridMismatch(String),

    #[error("expected a {expected:?}-convention Zak array, got {found:?}")]
    ConventionMismatch {
        expected: crate::zak::Convention,
        found: crate::zak::Convention,
    },

    #[error("point (q = {q}, p = {p}) lies outside the rectangle R(q0) = [-{half_q}, {half_q}] x [-{half_p}, {half_p}]")]
    OutOfRectangle {
        q: f64,
        p: f64,
        half_q: f64,
        half_p: f64,
    },

    #[error("band [{lo}, {hi}) is outside the grid momentum range [{min}, {max})")]
    BandOutOfRange {
        lo: f64,
        hi: f64,
        min: f64,
        max: f64,
    },

    #[error("bandwidth p0 = {p0} exceeds 2*pi/q0 = {limit}; refusing to alias")]
    BandwidthTooLarge { p0: f64, limit: f64 },

    #[error("band spec is invalid: {0}")]
    InvalidBand(String),

    #[error("fiducial momentum wavefunction vanishes on the grid (min |phi0| = {min_abs})")]
    NonvanishingViolated { min_abs: f64 },

    #[error("smoothing width epsilon = {epsilon} too large: comb peaks merge (limit {limit})")]
    EpsilonTooLarge { epsilon: f64, limit: f64 },

    #[error("least-squares system ill-conditioned: condition {condition:.3e} exceeds {cap:.1e}")]
    IllConditioned { condition: f64, cap: f64 },

    #[error("polynomial degree {degree} exceeds the supported cap of {cap}")]
    PolynomialDegreeTooHigh { degree: usize, cap: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed file: {0}")]
    MalformedFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
