//! Integer primitives: 2-adic valuations, integer roots, perfect powers,
//! primality, Cullen residues and Pollard–Brent rho.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod ecm;
mod mont;

pub use ecm::{ecm_b1, ecm_counted, EcmResult};

/// Exact 2-adic split `x = 2^v2(x) * odd_part(x)`. Zero has no valuation.
pub trait TwoAdic: Sized {
    fn v2(&self) -> u64;
    fn odd_part(&self) -> Self;
}

impl TwoAdic for u64 {
    fn v2(&self) -> u64 {
        assert!(*self != 0, "v2 is undefined for 0");
        u64::from(self.trailing_zeros())
    }

    fn odd_part(&self) -> Self {
        self >> self.v2()
    }
}

impl TwoAdic for BigUint {
    fn v2(&self) -> u64 {
        self.trailing_zeros().expect("v2 is undefined for 0")
    }

    fn odd_part(&self) -> Self {
        self >> self.v2()
    }
}

pub fn v2<T: TwoAdic>(x: &T) -> u64 {
    x.v2()
}

pub fn odd_part<T: TwoAdic>(x: &T) -> T {
    x.odd_part()
}

/// `floor(x^(1/w))` together with whether the root is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NthRoot {
    pub root: BigUint,
    pub exact: bool,
}

pub fn int_nth_root(x: &BigUint, w: u32) -> NthRoot {
    assert!(!x.is_zero(), "int_nth_root needs x >= 1");
    assert!(w >= 2, "int_nth_root needs w >= 2");
    let root = x.nth_root(w);
    let exact = &root.pow(w) == x;
    NthRoot { root, exact }
}

/// Floor of the `w`-th root of a machine integer.
pub fn iroot_u64(x: u64, w: u32) -> u64 {
    assert!(w >= 1);
    if w == 1 || x < 2 {
        return x;
    }
    let fits = |r: u64| r.checked_pow(w).is_some_and(|v| v <= x);
    let mut r = (x as f64).powf(1.0 / f64::from(w)).round() as u64;
    while r > 0 && !fits(r) {
        r -= 1;
    }
    while fits(r + 1) {
        r += 1;
    }
    r
}

/// Maximal perfect-power form `x = base^exponent`; `base` is not itself a power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PowerSignature {
    pub base: u64,
    pub exponent: u32,
}

impl PowerSignature {
    pub fn value(&self) -> u64 {
        self.base.pow(self.exponent)
    }

    /// `base^(exponent / w)` for a divisor `w` of the exponent.
    pub fn root_for(&self, w: u32) -> Option<u64> {
        (w > 0 && self.exponent % w == 0).then(|| self.base.pow(self.exponent / w))
    }
}

/// Tries exponents from `floor(log2 x)` down to 2; the first exact root
/// carries the maximal exponent.
pub fn power_signature(x: u64) -> Result<PowerSignature> {
    if x < 2 {
        return Err(Error::NoSignature(x));
    }
    let max_w = 63 - x.leading_zeros();
    for w in (2..=max_w).rev() {
        let r = iroot_u64(x, w);
        if r >= 2 && r.pow(w) == x {
            return Ok(PowerSignature { base: r, exponent: w });
        }
    }
    Ok(PowerSignature { base: x, exponent: 1 })
}

/// Sieve of Eratosthenes; all primes `<= limit` in ascending order.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = usize::try_from(limit).expect("sieve limit exceeds address space");
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn small_primes() -> &'static [u64] {
    static SMALL: OnceLock<Vec<u64>> = OnceLock::new();
    SMALL.get_or_init(|| primes_up_to(1000))
}

#[inline]
pub fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

pub fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// `C_n mod q = (n * 2^n + 1) mod q`, without building `C_n`.
pub fn cullen_mod(n: u64, q: u64) -> u64 {
    assert!(q >= 2, "cullen_mod needs q >= 2");
    let t = mulmod_u64(n % q, powmod_u64(2, n, q), q);
    ((u128::from(t) + 1) % u128::from(q)) as u64
}

/// Same residue for a modulus of any size.
pub fn cullen_mod_big(n: u64, q: &BigUint) -> BigUint {
    assert!(*q >= BigUint::from(2u8), "cullen_mod needs q >= 2");
    let t = BigUint::from(2u8).modpow(&BigUint::from(n), q) * (BigUint::from(n) % q);
    (t + 1u8) % q
}

/// How far a primality answer can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Primality {
    Composite,
    /// Deterministic answer (input below 2^64).
    Proven,
    /// Passed the strong probable-prime battery.
    Probable,
}

impl Primality {
    pub fn is_prime(self) -> bool {
        !matches!(self, Primality::Composite)
    }
}

/// Round count for the probable-prime battery used above 2^64.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimalityConfig {
    pub mr_rounds: u32,
}

impl Default for PrimalityConfig {
    fn default() -> Self {
        Self { mr_rounds: 64 }
    }
}

impl PrimalityConfig {
    /// Upper bound on the chance a composite passes the Miller–Rabin rounds
    /// alone (4^-rounds); the strong Lucas test is applied on top.
    pub fn error_bound(&self) -> f64 {
        0.25f64.powi(self.mr_rounds as i32)
    }
}

const U64_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime_u64(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    for &p in &U64_WITNESSES {
        if x % p == 0 {
            return x == p;
        }
    }
    let s = (x - 1).trailing_zeros();
    let d = (x - 1) >> s;
    'witness: for &a in &U64_WITNESSES {
        let mut y = powmod_u64(a, d, x);
        if y == 1 || y == x - 1 {
            continue;
        }
        for _ in 1..s {
            y = mulmod_u64(y, y, x);
            if y == x - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn strong_probable_prime(x: &BigUint, base: &BigUint) -> bool {
    let one = BigUint::one();
    let x_minus_1 = x - &one;
    let s = x_minus_1.trailing_zeros().unwrap_or(0);
    let d = &x_minus_1 >> s;
    let mut y = base.modpow(&d, x);
    if y == one || y == x_minus_1 {
        return true;
    }
    for _ in 1..s {
        y = (&y * &y) % x;
        if y == x_minus_1 {
            return true;
        }
    }
    false
}

fn jacobi(a: &BigUint, n: &BigUint) -> i32 {
    let mut a = a % n;
    let mut n = n.clone();
    let mut t = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n_mod8 = (&n % 8u8).to_u8().unwrap_or(0);
        if tz % 2 == 1 && (n_mod8 == 3 || n_mod8 == 5) {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u8) == BigUint::from(3u8) && (&n % 4u8) == BigUint::from(3u8) {
            t = -t;
        }
        a %= &n;
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

fn half_mod(v: BigUint, n: &BigUint) -> BigUint {
    if v.is_odd() {
        (v + n) >> 1
    } else {
        v >> 1
    }
}

/// Strong Lucas probable-prime test with Selfridge parameters (P = 1).
/// Expects an odd `x` with no factor below 1000.
fn strong_lucas_probable_prime(x: &BigUint) -> bool {
    if int_nth_root(x, 2).exact {
        return false;
    }
    // D = 5, -7, 9, -11, ... until (D/x) = -1
    let mut d_abs = 5u64;
    let mut negative = false;
    let d_mod = loop {
        let d_res = if negative {
            x - (BigUint::from(d_abs) % x)
        } else {
            BigUint::from(d_abs) % x
        };
        match jacobi(&d_res, x) {
            -1 => break d_res,
            0 if BigUint::from(d_abs) % x != BigUint::zero() => return false,
            _ => {}
        }
        d_abs += 2;
        negative = !negative;
    };
    // Q = (1 - D) / 4 mod x
    let q_mod = {
        let one_minus_d = (BigUint::one() + x - &d_mod) % x;
        let inv4 = half_mod(half_mod(BigUint::one(), x), x);
        (one_minus_d * inv4) % x
    };

    let x_plus_1: BigUint = x + 1u8;
    let s = x_plus_1.trailing_zeros().unwrap_or(0);
    let d = &x_plus_1 >> s;

    let two = BigUint::from(2u8);
    let mut u = BigUint::one();
    let mut v = BigUint::one();
    let mut qk = q_mod.clone();
    let bits = d.bits();
    for i in (0..bits - 1).rev() {
        u = (&u * &v) % x;
        v = (&v * &v + x * 2u8 - (&qk * &two) % x) % x;
        qk = (&qk * &qk) % x;
        if d.bit(i) {
            let nu = half_mod((&u + &v) % x, x);
            let nv = half_mod((&d_mod * &u + &v) % x, x);
            u = nu;
            v = nv;
            qk = (&qk * &q_mod) % x;
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v + x * 2u8 - (&qk * &two) % x) % x;
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk) % x;
    }
    false
}

/// Deterministic below 2^64. Above: trial division, strong base-2 test,
/// strong Lucas test, then `mr_rounds - 1` further strong tests with the
/// next prime bases.
pub fn primality_with(x: &BigUint, cfg: &PrimalityConfig) -> Primality {
    if let Some(small) = x.to_u64() {
        return if is_prime_u64(small) {
            Primality::Proven
        } else {
            Primality::Composite
        };
    }
    for &p in small_primes() {
        if (x % p).is_zero() {
            return Primality::Composite;
        }
    }
    if !strong_probable_prime(x, &BigUint::from(2u8)) {
        return Primality::Composite;
    }
    if !strong_lucas_probable_prime(x) {
        return Primality::Composite;
    }
    for &p in small_primes().iter().skip(1).take(cfg.mr_rounds.saturating_sub(1) as usize) {
        if !strong_probable_prime(x, &BigUint::from(p)) {
            return Primality::Composite;
        }
    }
    Primality::Probable
}

pub fn primality(x: &BigUint) -> Primality {
    primality_with(x, &PrimalityConfig::default())
}

pub fn is_prime(x: &BigUint) -> bool {
    primality(x).is_prime()
}

/// Ring operations the rho iteration needs; lets one Brent loop serve both
/// machine words and Montgomery residues.
trait RhoRing: Clone + PartialEq {
    type Ctx;
    /// `x^2 + c` (the Montgomery version is `x^2 R^(-1) + c`, an equally
    /// good map since it is still a polynomial modulo every factor).
    fn step(&self, c: &Self, ctx: &Self::Ctx) -> Self;
    /// `acc * (a - b)`.
    fn mul_diff(acc: &Self, a: &Self, b: &Self, ctx: &Self::Ctx) -> Self;
    /// `gcd(self, n)`.
    fn gcd_n(&self, ctx: &Self::Ctx) -> BigUint;
    fn diff(a: &Self, b: &Self, ctx: &Self::Ctx) -> Self;
}

impl RhoRing for u64 {
    type Ctx = u64;
    fn step(&self, c: &Self, m: &u64) -> Self {
        ((u128::from(*self) * u128::from(*self) + u128::from(*c)) % u128::from(*m)) as u64
    }
    fn mul_diff(acc: &Self, a: &Self, b: &Self, m: &u64) -> Self {
        mulmod_u64(*acc, a.abs_diff(*b), *m)
    }
    fn gcd_n(&self, m: &u64) -> BigUint {
        BigUint::from(self.gcd(m))
    }
    fn diff(a: &Self, b: &Self, _: &u64) -> Self {
        a.abs_diff(*b)
    }
}

impl RhoRing for mont::Limbs {
    type Ctx = (mont::Mont, BigUint);
    fn step(&self, c: &Self, (m, _): &Self::Ctx) -> Self {
        m.add(&m.mul(self, self), c)
    }
    fn mul_diff(acc: &Self, a: &Self, b: &Self, (m, _): &Self::Ctx) -> Self {
        m.mul(acc, &m.sub(a, b))
    }
    fn gcd_n(&self, (_, n): &Self::Ctx) -> BigUint {
        Integer::gcd(&mont::to_biguint(self), n)
    }
    fn diff(a: &Self, b: &Self, (m, _): &Self::Ctx) -> Self {
        m.sub(a, b)
    }
}

const RHO_BATCH: u64 = 128;

/// One Brent cycle search. Returns the gcd it settled on (may equal the
/// modulus) or `None` when the budget ran out.
fn brent_attempt<T: RhoRing>(
    ctx: &T::Ctx,
    n: &BigUint,
    y0: T,
    c: T,
    one: T,
    budget: u64,
    used: &mut u64,
) -> Option<BigUint> {
    let mut y = y0;
    let mut r = 1u64;
    let mut q = one;
    let mut g = BigUint::one();
    let mut xs = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        xs = y.clone();
        for _ in 0..r {
            y = y.step(&c, ctx);
        }
        *used += r;
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let batch = RHO_BATCH.min(r - k);
            for _ in 0..batch {
                y = y.step(&c, ctx);
                q = T::mul_diff(&q, &xs, &y, ctx);
            }
            *used += batch;
            g = q.gcd_n(ctx);
            k += batch;
        }
        r *= 2;
        if g.is_one() && *used >= budget {
            return None;
        }
    }
    if &g == n {
        // the batch overshot; replay it one step at a time
        for _ in 0..r {
            ys = ys.step(&c, ctx);
            *used += 1;
            g = T::diff(&xs, &ys, ctx).gcd_n(ctx);
            if !g.is_one() {
                break;
            }
        }
    }
    Some(g)
}

/// Outcome of a budgeted rho run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoResult {
    pub factor: Option<BigUint>,
    pub iterations: u64,
}

/// Pollard rho with Brent's cycle detection. Seeds and polynomial
/// constants come from `x` itself, so runs are reproducible.
pub fn pollard_rho_counted(x: &BigUint, budget: u64) -> RhoResult {
    let mut used = 0u64;
    if x < &BigUint::from(4u8) {
        return RhoResult { factor: None, iterations: 0 };
    }
    if x.is_even() {
        return RhoResult { factor: Some(BigUint::from(2u8)), iterations: 0 };
    }
    let seed = (x % 1_000_003u32).to_u64().unwrap_or(0);
    let mut attempt = 0u64;
    while used < budget {
        let c = attempt + 1;
        let y0 = 2 + (seed + 7919 * attempt) % 1_000_000;
        let found = match x.to_u64() {
            Some(small) if small < (1 << 63) => {
                brent_attempt(&small, x, y0 % small, c % small, 1u64, budget, &mut used)
            }
            _ => {
                let m = mont::Mont::new(x);
                let (y0, c, one) = (m.to_mont(&BigUint::from(y0)), m.to_mont(&BigUint::from(c)), m.one());
                brent_attempt(&(m, x.clone()), x, y0, c, one, budget, &mut used)
            }
        };
        match found {
            Some(g) if !g.is_one() && &g != x => {
                return RhoResult { factor: Some(g), iterations: used };
            }
            Some(_) => attempt += 1,
            None => break,
        }
    }
    RhoResult { factor: None, iterations: used }
}

pub fn pollard_rho(x: &BigUint, budget: u64) -> Option<BigUint> {
    pollard_rho_counted(x, budget).factor
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn valuations() {
        assert_eq!(v2(&48u64), 4);
        assert_eq!(v2(&1u64), 0);
        assert_eq!(v2(&(1u64 << 20)), 20);
        assert_eq!(odd_part(&48u64), 3);
        assert_eq!(odd_part(&7u64), 7);
        assert_eq!(odd_part(&1024u64), 1);
        assert_eq!(v2(&big(48)), 4);
        assert_eq!(odd_part(&big(48)), big(3));
    }

    #[test]
    #[should_panic]
    fn v2_of_zero_panics() {
        v2(&0u64);
    }

    #[test]
    fn nth_roots() {
        assert_eq!(int_nth_root(&big(1000), 3), NthRoot { root: big(10), exact: true });
        assert_eq!(int_nth_root(&big(1001), 3), NthRoot { root: big(10), exact: false });
        // 576^3 = 191_102_976 = 3^6 * 2^18
        let x = big(729) << 18;
        assert_eq!(x, big(191_102_976));
        assert_eq!(int_nth_root(&x, 3), NthRoot { root: big(576), exact: true });
        assert_eq!(iroot_u64(u64::MAX, 2), 4_294_967_295);
        assert_eq!(iroot_u64(1 << 63, 3), 2_097_152);
    }

    #[test]
    fn signatures() {
        assert_eq!(power_signature(729), Ok(PowerSignature { base: 3, exponent: 6 }));
        assert_eq!(power_signature(27), Ok(PowerSignature { base: 3, exponent: 3 }));
        assert_eq!(power_signature(15), Ok(PowerSignature { base: 15, exponent: 1 }));
        assert_eq!(power_signature(1 << 62), Ok(PowerSignature { base: 2, exponent: 62 }));
        assert_eq!(power_signature(1), Err(Error::NoSignature(1)));
        let sig = power_signature(729).unwrap();
        assert_eq!(sig.root_for(3), Some(9));
        assert_eq!(sig.root_for(4), None);
    }

    #[test]
    fn primes_small() {
        assert!(!is_prime(&big(1537)));
        assert!(is_prime(&big(65537)));
        assert!(!is_prime(&big(1)));
        assert!(!is_prime(&big(0)));
        assert!(is_prime(&big(2)));
        // 2^32 + 1 = 641 * 6700417
        assert!(!is_prime(&big((1 << 32) + 1)));
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn primes_large() {
        // 2^89 - 1 and 2^127 - 1 are Mersenne primes
        let m89 = (BigUint::one() << 89) - 1u8;
        let m127 = (BigUint::one() << 127) - 1u8;
        assert_eq!(primality(&m89), Primality::Probable);
        assert_eq!(primality(&m127), Primality::Probable);
        assert_eq!(primality(&(&m89 * &m127)), Primality::Composite);
        // strong pseudoprime to bases 2..37 beyond 2^64 would still fail Lucas;
        // a Carmichael number times a large prime is a cheap composite probe
        let carmichael = big(561) * &m89;
        assert_eq!(primality(&carmichael), Primality::Composite);
        // 141 * 2^141 + 1 is a Cullen prime
        let c141 = (big(141) << 141) + 1u8;
        assert_eq!(primality(&c141), Primality::Probable);
    }

    #[test]
    fn lucas_alone_rejects_base2_pseudoprimes() {
        // 2047 = 23 * 89 is a strong base-2 pseudoprime
        assert!(strong_probable_prime(&big(2047), &big(2)));
        assert!(!strong_lucas_probable_prime(&big(2047)));
        // and a known strong Lucas pseudoprime 5459 = 53 * 103 is caught by base 2
        assert!(strong_lucas_probable_prime(&big(5459)));
        assert!(!strong_probable_prime(&big(5459), &big(2)));
        for p in [1009u64, 7919, 104_729, 1_000_003] {
            assert!(strong_lucas_probable_prime(&big(p)), "{p}");
        }
    }

    #[test]
    fn cullen_residues() {
        assert_eq!(cullen_mod(6, 11), 0);
        assert_eq!(cullen_mod(3, 3), 1);
        assert_eq!(cullen_mod(1, 5), 3);
        assert_eq!(cullen_mod(6, 5), 0);
        assert_eq!(cullen_mod_big(6, &big(385)), big(0));
        assert_eq!(cullen_mod_big(9, &big(121)), big(4609 % 121));
    }

    #[test]
    fn ecm_finds_medium_factors() {
        // 40-bit and 48-bit primes: far beyond a small rho budget
        let p = big(1_099_511_627_791);
        let q = big(281_474_976_710_677);
        let r = big(18_446_744_073_709_551_557);
        for x in [&p * &q, &q * &r] {
            let res = ecm_counted(&x, 60);
            let f = res.factor.expect("ecm split");
            assert!((&x % &f).is_zero() && !f.is_one() && f != x);
        }
    }

    #[test]
    fn ecm_budget_and_trivial_inputs() {
        assert_eq!(ecm_counted(&big(1_000_003), 0), EcmResult { factor: None, curves: 0 });
        assert_eq!(ecm_counted(&big(3), 5).factor, None);
        // a prime never splits; all curves are spent
        assert_eq!(ecm_counted(&big(1_000_003), 3), EcmResult { factor: None, curves: 3 });
    }

    #[test]
    fn rho_examples() {
        let f = pollard_rho(&big(1537), 10_000).unwrap();
        assert!(f == big(29) || f == big(53));
        let f = pollard_rho(&big(4609), 10_000).unwrap();
        assert!(f == big(11) || f == big(419));
        assert_eq!(pollard_rho(&big(25), 10_000), Some(big(5)));
        let semi = big(1_000_003) * big(998_244_353);
        let f = pollard_rho(&semi, 1_000_000).unwrap();
        assert!(f == big(1_000_003) || f == big(998_244_353));
    }

    #[test]
    fn rho_big_path() {
        let p = (BigUint::one() << 61) - 1u8;
        let x = &p * big(1_000_003);
        let f = pollard_rho(&x, 1_000_000).unwrap();
        assert!(f == big(1_000_003) || f == p);
    }

    #[test]
    fn rho_budget_exhaustion_is_absent() {
        let p = (BigUint::one() << 61) - 1u8;
        let q = (BigUint::one() << 89) - 1u8;
        let r = pollard_rho_counted(&(p * q), 500);
        assert_eq!(r.factor, None);
        assert!(r.iterations >= 500);
    }

    #[test]
    fn rho_is_reproducible() {
        let x = big(1_000_003) * big(1_000_033);
        assert_eq!(pollard_rho_counted(&x, 100_000), pollard_rho_counted(&x, 100_000));
    }
}
