//! Cullen instances `C_n = n * 2^n + 1`, prime shapes `p = m * 2^a + 1`,
//! and the Lehmer shape condition `(p - 1) | (C_n - 1)`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, power_signature, PowerSignature, TwoAdic};
use crate::error::{Error, Result};

/// Largest `n` for which `C_n` is built in full unless configured otherwise.
pub const DEFAULT_MATERIALIZE_CAP: u64 = 300_000;

/// Perfect-power form of the odd part of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OddPartSignature {
    /// `n` is a power of two.
    One,
    Power(PowerSignature),
}

/// `n = 2^alpha * n1` with `n1` odd, plus the size of `C_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CullenInstance {
    pub n: u64,
    pub alpha: u64,
    pub n1: u64,
    pub n1_signature: OddPartSignature,
    pub bit_length: u64,
}

impl CullenInstance {
    /// The zero-case and bound arguments assume `n >= 3`.
    pub fn below_hypothesis(&self) -> bool {
        self.n < 3
    }

    /// `n + alpha`, the exponent of 2 in `C_n - 1`.
    pub fn two_exponent(&self) -> u64 {
        self.n + self.alpha
    }
}

pub fn decompose(n: u64) -> Result<CullenInstance> {
    if n == 0 {
        return Err(Error::BelowMinimum { what: "n", min: 1, got: 0 });
    }
    let alpha = n.v2();
    let n1 = n.odd_part();
    let n1_signature = if n1 == 1 {
        OddPartSignature::One
    } else {
        OddPartSignature::Power(power_signature(n1)?)
    };
    // n * 2^n is even, so the trailing +1 never carries
    let bit_length = n + u64::from(64 - n.leading_zeros());
    Ok(CullenInstance { n, alpha, n1, n1_signature, bit_length })
}

pub fn cullen_value(n: u64, cap: u64) -> Result<BigUint> {
    if n > cap {
        return Err(Error::MaterializationCap { n, cap });
    }
    Ok((BigUint::from(n) << n) + 1u8)
}

/// An odd prime written `p = m * 2^a + 1` with `m` odd and `a >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeShape {
    #[serde(with = "crate::decimal")]
    pub p: BigUint,
    #[serde(with = "crate::decimal")]
    pub m: BigUint,
    pub a: u64,
}

pub fn prime_shape(p: &BigUint) -> Result<PrimeShape> {
    if p < &BigUint::from(3u8) || !is_prime(p) {
        return Err(Error::NotOddPrime(p.to_string()));
    }
    Ok(shape_of_odd_prime(p))
}

/// Shape of a prime the caller already knows to be odd and prime.
pub(crate) fn shape_of_odd_prime(p: &BigUint) -> PrimeShape {
    let p_minus_1 = p - 1u8;
    let a = p_minus_1.v2();
    PrimeShape { p: p.clone(), m: p_minus_1 >> a, a }
}

/// `(p - 1) | n * 2^n`, i.e. `m | n1` and `a <= n + alpha`.
pub fn shape_divides(shape: &PrimeShape, inst: &CullenInstance) -> bool {
    let m_divides = match shape.m.to_u64() {
        Some(m) => m != 0 && inst.n1 % m == 0,
        None => false,
    };
    m_divides && shape.a <= inst.two_exponent()
}

/// The five known Fermat primes `2^(2^gamma) + 1`.
pub const FERMAT_PRIMES: [(u32, u64); 5] = [(0, 3), (1, 5), (2, 17), (3, 257), (4, 65537)];

pub fn fermat_primes() -> &'static [(u32, u64)] {
    &FERMAT_PRIMES
}

/// `2^(2^gamma) + 1`.
pub fn fermat_number(gamma: u32) -> BigUint {
    (BigUint::from(1u8) << (1u64 << gamma)) + 1u8
}

pub fn divides(q: &BigUint, x: &BigUint) -> bool {
    !q.is_zero() && (x % q).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn decompose_examples() {
        let i = decompose(12).unwrap();
        assert_eq!((i.alpha, i.n1), (2, 3));
        assert_eq!(i.n1_signature, OddPartSignature::Power(PowerSignature { base: 3, exponent: 1 }));
        let i = decompose(27).unwrap();
        assert_eq!((i.alpha, i.n1), (0, 27));
        assert_eq!(i.n1_signature, OddPartSignature::Power(PowerSignature { base: 3, exponent: 3 }));
        let i = decompose(16).unwrap();
        assert_eq!((i.alpha, i.n1, i.n1_signature), (4, 1, OddPartSignature::One));
        assert!(decompose(0).is_err());
        assert!(decompose(2).unwrap().below_hypothesis());
        assert!(!decompose(3).unwrap().below_hypothesis());
    }

    #[test]
    fn bit_length_matches_value() {
        for n in 1..=600u64 {
            let inst = decompose(n).unwrap();
            assert_eq!(inst.bit_length, cullen_value(n, 1000).unwrap().bits(), "n = {n}");
        }
    }

    #[test]
    fn values() {
        assert_eq!(cullen_value(1, 10).unwrap(), big(3));
        assert_eq!(cullen_value(6, 10).unwrap(), big(385));
        let c141 = cullen_value(141, DEFAULT_MATERIALIZE_CAP).unwrap();
        assert_eq!(c141.bits(), 149);
        assert!(is_prime(&c141));
        assert_eq!(cullen_value(11, 10), Err(Error::MaterializationCap { n: 11, cap: 10 }));
    }

    #[test]
    fn shapes() {
        let s = prime_shape(&big(97)).unwrap();
        assert_eq!((s.m.clone(), s.a), (big(3), 5));
        let s = prime_shape(&big(11)).unwrap();
        assert_eq!((s.m.clone(), s.a), (big(5), 1));
        let s = prime_shape(&big(65537)).unwrap();
        assert_eq!((s.m.clone(), s.a), (big(1), 16));
        assert!(prime_shape(&big(2)).is_err());
        assert!(prime_shape(&big(15)).is_err());
    }

    #[test]
    fn shape_condition() {
        let six = decompose(6).unwrap();
        assert!(!shape_divides(&prime_shape(&big(11)).unwrap(), &six));
        assert!(shape_divides(&prime_shape(&big(7)).unwrap(), &six));
        for n in 1..50 {
            assert!(shape_divides(&prime_shape(&big(3)).unwrap(), &decompose(n).unwrap()));
        }
        // a too large: 65537 needs 2^16 | n * 2^n
        assert!(!shape_divides(&prime_shape(&big(65537)).unwrap(), &decompose(3).unwrap()));
        assert!(shape_divides(&prime_shape(&big(65537)).unwrap(), &decompose(16).unwrap()));
    }

    #[test]
    fn fermat_list() {
        assert_eq!(fermat_primes().len(), 5);
        assert_eq!(fermat_primes()[4], (4, 65537));
        for &(g, p) in fermat_primes() {
            assert_eq!(fermat_number(g), big(p));
            assert!(is_prime(&big(p)));
        }
        let f5 = fermat_number(5);
        assert!(divides(&big(641), &f5));
        assert!(!is_prime(&f5));
    }
}
