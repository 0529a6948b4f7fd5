//! Error types shared across the library.

use thiserror::Error;

/// Errors produced by flux decomposition, phase-shift evaluation, and the
/// scattering observables built on top of them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AbError {
    #[error("flux alpha must be finite (got {0})")]
    NonFiniteFlux(f64),

    #[error("flux alpha magnitude exceeds 2^53, integer/fraction split would be inexact (got {0})")]
    FluxOutOfRange(f64),

    #[error("energy must be strictly positive (got {0})")]
    NonpositiveEnergy(f64),

    #[error("mass must be strictly positive (got {0})")]
    NonpositiveMass(f64),

    #[error("hbar must be strictly positive (got {0})")]
    NonpositiveHbar(f64),

    #[error("wavenumber must be strictly positive (got {0})")]
    NonpositiveWavenumber(f64),

    #[error("bound-state energy magnitude must be strictly positive (got {0})")]
    InvalidExtension(f64),

    #[error("channel l={l} is not a modified channel (expected l={minus_n} or l={minus_n1})")]
    WrongChannel { l: i64, minus_n: i64, minus_n1: i64 },

    #[error("channel l={0} carries no bound-state energy")]
    MissingBoundState(i64),

    #[error("forward direction phi = 0 (mod 2 pi) is singular")]
    ForwardSingularity,

    #[error("no sign change over bracket [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("bracket endpoints must be finite with lo < hi (got [{lo}, {hi}])")]
    BadBracket { lo: f64, hi: f64 },

    #[error("density must be strictly positive (got {0})")]
    NonpositiveDensity(f64),

    #[error("quadrature needs at least {min} steps (got {got})")]
    TooFewQuadratureSteps { min: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, AbError>;
