use thiserror::Error;

/// Errors raised when an operation's domain precondition is violated.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} must be at least {min}, got {got}")]
    BelowMinimum { what: &'static str, min: u64, got: u64 },

    #[error("power signature is undefined for {0}")]
    NoSignature(u64),

    #[error("C_{n} would need materializing beyond the cap of n = {cap}")]
    MaterializationCap { n: u64, cap: u64 },

    #[error("{0} is not an odd prime")]
    NotOddPrime(String),

    #[error("exponent {0} must be odd and at least 3")]
    EvenOrSmallExponent(u64),

    #[error("zero-case precondition failed: {0}")]
    ZeroCase(&'static str),

    #[error("q = {q} gives q^3 = {cube} > {bound}; the case is vacuous")]
    VacuousPrime { q: u64, cube: u64, bound: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
