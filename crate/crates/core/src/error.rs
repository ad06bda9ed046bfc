use thiserror::Error;

/// Errors raised by the metric, sphere, profile, conformal and fit modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),
    #[error("radius {r} lies below the boundary radius {boundary}")]
    BelowBoundary { r: f64, boundary: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid gluing specification: {0}")]
    InvalidGluing(String),
    #[error("warp function is non-positive at r = {0}")]
    NonPositiveWarp(f64),
    #[error("grid is not strictly increasing")]
    UnsortedGrid,
    #[error("grid too coarse for stable differences: {0}")]
    CoarseGrid(String),
    #[error("band limit {band_limit} exceeds anti-aliasing capacity {capacity}")]
    Aliasing { band_limit: usize, capacity: usize },
    #[error("spectral tail {tail:e} exceeds 1e-8 after pullback")]
    SpectralTail { tail: f64 },
    #[error("design matrix is rank deficient (condition estimate {0:e})")]
    RankDeficient(f64),
    #[error("quadrature failed to converge on [{a}, {b}] (error estimate {err:e})")]
    QuadratureNonConvergence { a: f64, b: f64, err: f64 },
    #[error("iteration failed to converge: {0}")]
    NonConvergence(String),
}

impl LabError {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            LabError::QuadratureNonConvergence { .. }
                | LabError::NonConvergence(_)
                | LabError::SpectralTail { .. }
                | LabError::RankDeficient(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
