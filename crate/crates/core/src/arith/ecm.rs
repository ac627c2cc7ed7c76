//! Lenstra's elliptic curve method on Montgomery curves
//! `B y^2 = x^3 + A x^2 + x`, using `X:Z` coordinates only.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::mont::{to_biguint, Limbs, Mont};
use super::primes_up_to;

#[derive(Clone)]
struct XZ {
    x: Limbs,
    z: Limbs,
}

struct Curve<'a> {
    m: &'a Mont,
    /// `(A + 2) / 4`, Montgomery form
    a24: Limbs,
}

impl Curve<'_> {
    fn dbl(&self, p: &XZ) -> XZ {
        let m = self.m;
        let s = m.add(&p.x, &p.z);
        let d = m.sub(&p.x, &p.z);
        let s2 = m.mul(&s, &s);
        let d2 = m.mul(&d, &d);
        let t = m.sub(&s2, &d2);
        XZ { x: m.mul(&s2, &d2), z: m.mul(&t, &m.add(&d2, &m.mul(&self.a24, &t))) }
    }

    /// `p + q` given `diff = p - q`.
    fn add(&self, p: &XZ, q: &XZ, diff: &XZ) -> XZ {
        let m = self.m;
        let u = m.mul(&m.sub(&p.x, &p.z), &m.add(&q.x, &q.z));
        let v = m.mul(&m.add(&p.x, &p.z), &m.sub(&q.x, &q.z));
        let plus = m.add(&u, &v);
        let minus = m.sub(&u, &v);
        XZ { x: m.mul(&diff.z, &m.mul(&plus, &plus)), z: m.mul(&diff.x, &m.mul(&minus, &minus)) }
    }

    /// Montgomery ladder for `k p`, `k >= 1`.
    fn mul(&self, p: &XZ, k: u64) -> XZ {
        debug_assert!(k >= 1);
        if k == 1 {
            return p.clone();
        }
        let mut r0 = p.clone();
        let mut r1 = self.dbl(p);
        for bit in (0..63 - k.leading_zeros()).rev() {
            if (k >> bit) & 1 == 1 {
                r0 = self.add(&r1, &r0, p);
                r1 = self.dbl(&r1);
            } else {
                r1 = self.add(&r1, &r0, p);
                r0 = self.dbl(&r0);
            }
        }
        r0
    }
}

/// Stage-1 bound used by curve number `i` (counting from 0): short curves
/// first, so small factors are cheap to find.
pub fn ecm_b1(i: u32) -> u64 {
    match i {
        0..=24 => 2_000,
        25..=114 => 11_000,
        _ => 50_000,
    }
}

const B2_FACTOR: u64 = 100;
const D: u64 = 210;

fn nontrivial(g: BigUint, n: &BigUint) -> Option<BigUint> {
    (!g.is_one() && &g != n).then_some(g)
}

/// One curve with Suyama's parametrization for `sigma >= 6`; stage 1 to
/// `b1`, then the standard prime continuation to `100 b1`.
fn run_curve(n: &BigUint, m: &Mont, sigma: u64, b1: u64, primes: &[u64]) -> Option<BigUint> {
    let s = BigUint::from(sigma) % n;
    let u = (&s * &s + n - BigUint::from(5u8) % n) % n;
    let v = (&s * 4u8) % n;
    let u3 = u.modpow(&BigUint::from(3u8), n);
    let v_minus_u = if v >= u { &v - &u } else { n - (&u - &v) };
    let num = v_minus_u.modpow(&BigUint::from(3u8), n) * ((&u * 3u8 + &v) % n) % n;
    let den = (&u3 * &v % n) * 16u8 % n;
    let Some(inv) = den.modinv(n) else {
        return nontrivial(Integer::gcd(&den, n), n);
    };
    let curve = Curve { m, a24: m.to_mont(&(num * inv % n)) };
    let mut q = XZ { x: m.to_mont(&u3), z: m.to_mont(&v.modpow(&BigUint::from(3u8), n)) };

    for &p in primes.iter().take_while(|&&p| p <= b1) {
        let mut pe = p;
        while pe <= b1 / p {
            pe *= p;
        }
        q = curve.mul(&q, pe);
    }
    // gcd(a R, n) = gcd(a, n), so Montgomery representatives can be used as is
    let g = Integer::gcd(&to_biguint(&q.z), n);
    if !g.is_one() {
        return nontrivial(g, n);
    }

    // stage 2: each prime b1 < r <= b2 is i D +- j with j < D/2 coprime to D,
    // and r Q = O modulo a factor iff X(iDQ) Z(jQ) - X(jQ) Z(iDQ) vanishes there
    let b2 = b1 * B2_FACTOR;
    let half = (D / 2) as usize;
    let mut baby: Vec<Option<XZ>> = vec![None; half + 1];
    let q2 = curve.dbl(&q);
    let mut prev = q.clone();
    let mut cur = curve.add(&q2, &q, &q);
    baby[1] = Some(q.clone());
    for j in (3..=half).step_by(2) {
        if D.gcd(&(j as u64)) == 1 {
            baby[j] = Some(cur.clone());
        }
        let next = curve.add(&cur, &q2, &prev);
        prev = std::mem::replace(&mut cur, next);
    }
    let step = curve.mul(&q, D);
    let mut i = (b1 / D).max(2);
    let mut giant_prev = curve.mul(&q, (i - 1) * D);
    let mut giant = curve.mul(&q, i * D);
    let mut acc = m.one();
    for &r in primes.iter().skip_while(|&&r| r <= b1).take_while(|&&r| r <= b2) {
        let target = (r + D / 2) / D;
        while i < target {
            let next = curve.add(&giant, &step, &giant_prev);
            giant_prev = std::mem::replace(&mut giant, next);
            i += 1;
        }
        let j = r.abs_diff(i * D) as usize;
        let Some(b) = baby[j].as_ref() else { continue };
        let t = m.sub(&m.mul(&giant.x, &b.z), &m.mul(&b.x, &giant.z));
        acc = m.mul(&acc, &t);
    }
    nontrivial(Integer::gcd(&to_biguint(&acc), n), n)
}

/// Outcome of a budgeted ECM run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EcmResult {
    pub factor: Option<BigUint>,
    pub curves: u32,
}

/// Elliptic curve factoring with at most `curves` curves, the `i`-th using
/// stage-1 bound `ecm_b1(i)`. Curves are seeded from `x`, so runs are
/// reproducible. Meant for odd composites with no tiny factors.
pub fn ecm_counted(x: &BigUint, curves: u32) -> EcmResult {
    if curves == 0 || x < &BigUint::from(4u8) {
        return EcmResult { factor: None, curves: 0 };
    }
    if x.is_even() {
        return EcmResult { factor: Some(BigUint::from(2u8)), curves: 0 };
    }
    let primes = primes_up_to(ecm_b1(curves - 1) * B2_FACTOR);
    let m = Mont::new(x);
    let seed = (x % 1_000_003u32).to_u64().unwrap_or(0);
    for i in 0..curves {
        let sigma = 6 + (seed + 7919 * u64::from(i)) % 1_000_000_007;
        if let Some(f) = run_curve(x, &m, sigma, ecm_b1(i), &primes) {
            return EcmResult { factor: Some(f), curves: i + 1 };
        }
    }
    EcmResult { factor: None, curves }
}
