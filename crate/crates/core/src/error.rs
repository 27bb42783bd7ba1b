use thiserror::Error;

/// Failure modes shared across the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("zeta has a pole at s = 1")]
    PoleAtOne,
    #[error("requested precision unreachable: {0}")]
    PrecisionUnreachable(String),
    #[error("path endpoint lies on a zero (|zeta| = {modulus:.3e} at sigma = {sigma}, t = {t})")]
    OnZero { sigma: f64, t: f64, modulus: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error(
        "quadrature did not reach tolerance: requested {requested:.3e}, achieved {achieved:.3e}"
    )]
    QuadratureFailure { requested: f64, achieved: f64 },
    #[error("parameters too small: {0}")]
    TooSmall(String),
    #[error("exact enumeration out of range: {0}")]
    TooLarge(String),
    #[error("{0} is not a squarefree product of window primes")]
    NotInSupport(u128),
}

pub type Result<T> = std::result::Result<T, Error>;
