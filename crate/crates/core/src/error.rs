use thiserror::Error;

use crate::C64;

/// Every failure mode of the library. Variants carry enough context to name
/// the violated condition in CLI messages.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("lambda must exceed 2 (got {0})")]
    InvalidLambda(f64),

    #[error("degenerate matrix: determinant {0:e}")]
    Degenerate(f64),

    #[error("element is not hyperbolic (trace {trace}, det sign {det_sign})")]
    NonHyperbolic { trace: f64, det_sign: i8 },

    #[error("cocycle base (cz+d)^2 = {0} lies on the closed negative real axis")]
    BranchCut(C64),

    #[error("inadmissible word: {0}")]
    InadmissibleWord(String),

    #[error("pole of the Moebius map lies in the closed disc (pole {pole}, disc centre {center}, radius {radius})")]
    PoleInClosure { pole: f64, center: f64, radius: f64 },

    #[error("inclusion violated: {condition} (margin {margin:e})")]
    InclusionViolated { condition: String, margin: f64 },

    #[error("Hurwitz zeta evaluated at its pole w = {0}")]
    PoleAtOne(C64),

    #[error("Hurwitz zeta requires Re q > 0 (got q = {0})")]
    DomainError(C64),

    #[error("s = {0} is within the guard distance of a continuation pole s = (1-k)/2")]
    PoleOfContinuation(C64),

    #[error("direct summation requires Re s > 1/2 (got s = {0})")]
    DirectRequiresHalfPlane(C64),

    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),

    #[error("spectral radius {0} >= 1: trace series diverges")]
    SpectralRadiusExceeded(f64),

    #[error("leading eigenvalue does not cross 1 on (1/2, 1): {0}")]
    NotBracketed(String),

    #[error("|Z| = {abs:e} at boundary point {s} is too small for the argument principle")]
    BoundaryTooClose { s: C64, abs: f64 },

    #[error("winding number {0} is not within 1e-3 of an integer")]
    WindingNotIntegral(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
