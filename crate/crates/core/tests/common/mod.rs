//! Oracles shared by the integration suites. Everything here is plain
//! big-integer arithmetic with no calls into the library under test.
#![allow(dead_code)]

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

pub const FIXTURE: &str =
    concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/data/cullen_factors_le300.txt");

pub fn cullen(n: u64) -> BigUint {
    (BigUint::from(n) << n) + 1u8
}

/// Plain sieve of Eratosthenes, as a bitmap.
pub fn sieve(limit: usize) -> Vec<bool> {
    let mut is_p = vec![true; limit + 1];
    is_p[0] = false;
    if limit >= 1 {
        is_p[1] = false;
    }
    let mut i = 2;
    while i * i <= limit {
        if is_p[i] {
            let mut j = i * i;
            while j <= limit {
                is_p[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    is_p
}

/// One line of the sympy-generated factor table.
#[derive(Debug, Clone)]
pub struct FactorRow {
    pub n: u64,
    pub complete: bool,
    pub factors: Vec<(BigUint, u32)>,
}

pub fn load_factor_table() -> Vec<FactorRow> {
    let text = std::fs::read_to_string(FIXTURE).expect("factor table present");
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let mut cols = line.split('\t');
            let n = cols.next().unwrap().parse().unwrap();
            let complete = cols.next().unwrap() == "1";
            let factors = cols
                .next()
                .unwrap_or("")
                .split(',')
                .filter(|s| !s.is_empty())
                .map(|pe| {
                    let (p, e) = pe.split_once('^').unwrap();
                    (p.parse().unwrap(), e.parse().unwrap())
                })
                .collect();
            FactorRow { n, complete, factors }
        })
        .collect()
}

/// What the Lehmer necessary conditions say about `C_n`, given the
/// (possibly partial) factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expected {
    Prime,
    /// Smallest prime failing `(p - 1) | C_n - 1`.
    Shape(BigUint),
    /// Smallest prime whose square divides `C_n` (with good shape).
    Square(BigUint),
    /// Complete factorization, squarefree, every shape fine, too few primes.
    Omega(usize),
    /// Complete factorization that passes every condition.
    Survives,
    /// Partial factorization with nothing refuted among the known primes.
    Unknown,
}

pub fn expected(row: &FactorRow, min_omega: usize) -> Expected {
    let c = cullen(row.n);
    let product: BigUint = row.factors.iter().map(|(p, e)| p.pow(*e)).product();
    assert!((&c % &product).is_zero(), "table factors of C_{} do not divide it", row.n);
    if row.complete {
        assert_eq!(product, c, "complete row for C_{} does not multiply out", row.n);
        if row.factors.len() == 1 && row.factors[0].1 == 1 {
            return Expected::Prime;
        }
    }
    let c_minus_1 = &c - 1u8;
    for (p, e) in &row.factors {
        if !(&c_minus_1 % (p - 1u8)).is_zero() {
            return Expected::Shape(p.clone());
        }
        if *e >= 2 {
            return Expected::Square(p.clone());
        }
    }
    if !row.complete {
        Expected::Unknown
    } else if row.factors.len() < min_omega {
        Expected::Omega(row.factors.len())
    } else {
        Expected::Survives
    }
}

/// Independent check of a claimed refutation.
pub fn witness_refutes(n: u64, q: &BigUint, square: bool) -> bool {
    let c = cullen(n);
    if square {
        (&c % (q * q)).is_zero()
    } else {
        (&c % q).is_zero() && !((&c - 1u8) % (q - 1u8)).is_zero()
    }
}

pub fn is_perfect_power_of(x: u64, base: u64, exp: u32) -> bool {
    base.checked_pow(exp) == Some(x)
}

/// Exact test of `X / (X^(1/3) + 1) > 2^(2n/3)` for `X = n 2^n`, by a
/// sufficient condition (`X^3 > 2^(2n) (r + 2)^3`, `r = floor cbrt X`) and
/// a necessary one (`X^3 > 2^(2n) (r + 1)^3`). `None` when they disagree.
pub fn two_thirds_oracle(n: u64) -> Option<bool> {
    let x = BigUint::from(n) << n;
    let r = x.cbrt();
    let lhs = x.pow(3);
    let scale = BigUint::one() << (2 * n);
    if r.pow(3) == x {
        return Some(lhs > scale * (&r + 1u8).pow(3));
    }
    let sufficient = lhs > &scale * (&r + 2u8).pow(3);
    let necessary = lhs > &scale * (&r + 1u8).pow(3);
    match (sufficient, necessary) {
        (true, _) => Some(true),
        (false, false) => Some(false),
        _ => None,
    }
}

pub fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}
