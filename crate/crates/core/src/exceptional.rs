//! The vanishing case: primes `p | C_n` with `(p - 1)^w = n * 2^n`.
//!
//! Such a prime exists only when `n1 = rho^w` for an odd `w >= 3` dividing
//! `n + alpha`, and then `p = rho * 2^((n + alpha) / w) + 1`. At most one of
//! the candidates can be prime: any smaller-`w` candidate is `Y^lambda + 1`
//! with `lambda > 1` odd, so `Y + 1` divides it.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{int_nth_root, primality_with, PrimalityConfig};
use crate::error::{Error, Result};
use crate::structure::{decompose, CullenInstance, OddPartSignature};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalCandidate {
    pub w: u32,
    pub rho: u64,
    /// `(n + alpha) / w`
    pub exponent: u64,
    #[serde(with = "crate::decimal")]
    pub p: BigUint,
    pub is_prime: bool,
    /// `p <= (n * 2^n)^(1/3) + 1`
    pub bound_ok: bool,
}

/// Checks `(2^alpha * rho^w + alpha) * u == w * a` for a prime with shape
/// parameters `(m, a)`, after validating `m = rho^u`, `n1 = rho^w`, `u <= w`.
pub fn zero_case_relation(
    inst: &CullenInstance,
    m: &BigUint,
    a: u64,
    rho: u64,
    u: u32,
    w: u32,
) -> Result<bool> {
    if u == 0 || w == 0 {
        return Err(Error::ZeroCase("u and w must be positive"));
    }
    if rho % 2 == 0 {
        return Err(Error::ZeroCase("rho must be odd"));
    }
    if u > w {
        return Err(Error::ZeroCase("u must not exceed w"));
    }
    if &BigUint::from(rho).pow(u) != m {
        return Err(Error::ZeroCase("m differs from rho^u"));
    }
    if BigUint::from(rho).pow(w) != BigUint::from(inst.n1) {
        return Err(Error::ZeroCase("n1 differs from rho^w"));
    }
    // 2^alpha * rho^w = 2^alpha * n1 = n
    let lhs = (u128::from(inst.n) + u128::from(inst.alpha)) * u128::from(u);
    let rhs = u128::from(w) * u128::from(a);
    Ok(lhs == rhs)
}

pub fn exceptional_bound_ok(candidate: &ExceptionalCandidate, inst: &CullenInstance) -> bool {
    let n_2n = BigUint::from(inst.n) << inst.n;
    candidate.p <= int_nth_root(&n_2n, 3).root + 1u8
}

pub fn exceptional_candidates(inst: &CullenInstance) -> Vec<ExceptionalCandidate> {
    exceptional_candidates_with(inst, &PrimalityConfig::default())
}

/// Candidates for each odd `w >= 3` dividing both the signature exponent of
/// `n1` and `n + alpha`, in ascending `w`.
pub fn exceptional_candidates_with(
    inst: &CullenInstance,
    cfg: &PrimalityConfig,
) -> Vec<ExceptionalCandidate> {
    let sig = match inst.n1_signature {
        OddPartSignature::One => return Vec::new(),
        OddPartSignature::Power(sig) => sig,
    };
    let shift = inst.two_exponent();
    (3..=sig.exponent)
        .step_by(2)
        .filter(|w| sig.exponent % w == 0 && shift % u64::from(*w) == 0)
        .map(|w| {
            let rho = sig.root_for(w).expect("w divides the signature exponent");
            let exponent = shift / u64::from(w);
            let p = (BigUint::from(rho) << exponent) + 1u8;
            let mut cand = ExceptionalCandidate {
                w,
                rho,
                exponent,
                is_prime: primality_with(&p, cfg).is_prime(),
                p,
                bound_ok: false,
            };
            cand.bound_ok = exceptional_bound_ok(&cand, inst);
            cand
        })
        .collect()
}

/// `X^u + 1 = (X + 1) * cofactor` for odd `u >= 3`.
pub fn odd_power_cofactor(x: &BigUint, u: u32) -> Result<(BigUint, BigUint)> {
    if u < 3 || u % 2 == 0 {
        return Err(Error::EvenOrSmallExponent(u64::from(u)));
    }
    if x < &BigUint::from(2u8) {
        return Err(Error::BelowMinimum { what: "X", min: 2, got: 0 });
    }
    let value = x.pow(u) + 1u8;
    let divisor = x + 1u8;
    let (cofactor, rem) = value.div_rem(&divisor);
    debug_assert!(rem == BigUint::from(0u8));
    Ok((divisor, cofactor))
}

/// Proof that the `w_small` candidate of `n` is `Y^lambda + 1`, hence composite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositeCertificate {
    pub n: u64,
    pub w_small: u32,
    pub w_large: u32,
    pub lambda: u32,
    #[serde(with = "crate::decimal")]
    pub y: BigUint,
    #[serde(with = "crate::decimal")]
    pub divisor: BigUint,
    #[serde(with = "crate::decimal")]
    pub cofactor: BigUint,
}

impl CompositeCertificate {
    /// Re-checks the certificate against the candidate prime `p`.
    pub fn verifies(&self, p: &BigUint) -> bool {
        let one = BigUint::one();
        self.lambda > 1
            && self.lambda % 2 == 1
            && self.divisor > one
            && self.cofactor > one
            && &(&self.divisor * &self.cofactor) == p
            && &(self.y.pow(self.lambda) + 1u8) == p
    }
}

/// Certifies every candidate except the largest-`w` one composite.
pub fn certify_smaller(inst: &CullenInstance, cands: &[ExceptionalCandidate]) -> Vec<CompositeCertificate> {
    let OddPartSignature::Power(sig) = inst.n1_signature else {
        return Vec::new();
    };
    let Some(top) = cands.iter().map(|c| c.w).max() else {
        return Vec::new();
    };
    cands
        .iter()
        .filter(|c| c.w < top)
        .map(|c| {
            let lcm = c.w.lcm(&top);
            let lambda = lcm / c.w;
            let rho0 = sig.root_for(lcm).expect("lcm divides the signature exponent");
            let y = BigUint::from(rho0) << (inst.two_exponent() / u64::from(lcm));
            let (divisor, cofactor) =
                odd_power_cofactor(&y, lambda).expect("lambda is odd and above 1");
            CompositeCertificate { n: inst.n, w_small: c.w, w_large: top, lambda, y, divisor, cofactor }
        })
        .collect()
}

/// An `n` with two or more prime candidates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub n: u64,
    pub primes: Vec<ExceptionalCandidate>,
}

/// Everything one scan over `3..=n_max` found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub n_max: u64,
    /// `(n, candidates)` for every `n` with at least one candidate.
    pub candidates: Vec<(u64, Vec<ExceptionalCandidate>)>,
    pub violations: Vec<Violation>,
    pub certificates: Vec<CompositeCertificate>,
}

impl UniquenessReport {
    pub fn multi_candidate(&self) -> impl Iterator<Item = u64> + '_ {
        self.candidates.iter().filter(|(_, c)| c.len() > 1).map(|(n, _)| *n)
    }
}

fn scan_one(n: u64, cfg: &PrimalityConfig) -> Option<(u64, Vec<ExceptionalCandidate>, Vec<CompositeCertificate>)> {
    let inst = decompose(n).expect("n >= 3");
    let cands = exceptional_candidates_with(&inst, cfg);
    if cands.is_empty() {
        return None;
    }
    let certs = certify_smaller(&inst, &cands);
    Some((n, cands, certs))
}

pub fn uniqueness_scan(n_max: u64) -> Result<UniquenessReport> {
    uniqueness_scan_with(n_max, &PrimalityConfig::default())
}

pub fn uniqueness_scan_with(n_max: u64, cfg: &PrimalityConfig) -> Result<UniquenessReport> {
    if n_max < 3 {
        return Err(Error::BelowMinimum { what: "n_max", min: 3, got: n_max });
    }
    #[cfg(feature = "parallel")]
    let found: Vec<_> = {
        use rayon::prelude::*;
        (3..=n_max).into_par_iter().filter_map(|n| scan_one(n, cfg)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let found: Vec<_> = (3..=n_max).filter_map(|n| scan_one(n, cfg)).collect();

    let mut report = UniquenessReport {
        n_max,
        candidates: Vec::new(),
        violations: Vec::new(),
        certificates: Vec::new(),
    };
    for (n, cands, certs) in found {
        let primes: Vec<_> = cands.iter().filter(|c| c.is_prime).cloned().collect();
        if primes.len() > 1 {
            report.violations.push(Violation { n, primes });
        }
        report.certificates.extend(certs);
        report.candidates.push((n, cands));
    }
    Ok(report)
}
