//! Verification toolkit for Cullen numbers `C_n = n * 2^n + 1` and the
//! Lehmer totient property.
//!
//! * [`arith`]: valuations, roots, perfect powers, primality, residues, rho.
//! * [`structure`]: Cullen instances, prime shapes, Fermat primes.
//! * [`exceptional`]: the vanishing case and uniqueness of the exceptional prime.
//! * [`bounds`]: the inequality chain ending at `n = 2^a * 3^b`, `n < 200,000`.
//! * [`screen`]: witness search refuting the Lehmer conditions per `n`.

pub mod arith;
pub mod bounds;
pub mod decimal;
pub mod error;
pub mod exceptional;
pub mod screen;
pub mod structure;

pub use error::{Error, Result};
