//! Montgomery arithmetic modulo an odd multi-limb modulus. Residues are
//! little-endian `u64` limbs, always fully reduced below the modulus.

use num_bigint::BigUint;

pub(crate) type Limbs = Vec<u64>;

pub(crate) struct Mont {
    n: Limbs,
    /// `-n^(-1) mod 2^64`
    n0inv: u64,
    /// `R^2 mod n` with `R = 2^(64 s)`
    r2: Limbs,
}

fn to_limbs(x: &BigUint, s: usize) -> Limbs {
    let mut v = x.to_u64_digits();
    v.resize(s, 0);
    v
}

pub(crate) fn to_biguint(a: &[u64]) -> BigUint {
    let digits: Vec<u32> = a.iter().flat_map(|&l| [l as u32, (l >> 32) as u32]).collect();
    BigUint::new(digits)
}

fn geq(a: &[u64], b: &[u64]) -> bool {
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        if x != y {
            return x > y;
        }
    }
    true
}

/// `a -= b`, returning the borrow.
fn sub_in_place(a: &mut [u64], b: &[u64]) -> bool {
    let mut borrow = false;
    for (x, &y) in a.iter_mut().zip(b) {
        let (d1, b1) = x.overflowing_sub(y);
        let (d2, b2) = d1.overflowing_sub(borrow as u64);
        *x = d2;
        borrow = b1 || b2;
    }
    borrow
}

/// `a += b`, returning the carry.
fn add_in_place(a: &mut [u64], b: &[u64]) -> bool {
    let mut carry = false;
    for (x, &y) in a.iter_mut().zip(b) {
        let (s1, c1) = x.overflowing_add(y);
        let (s2, c2) = s1.overflowing_add(carry as u64);
        *x = s2;
        carry = c1 || c2;
    }
    carry
}

impl Mont {
    /// `n` must be odd and greater than 1.
    pub fn new(n: &BigUint) -> Self {
        assert!(n.bit(0) && n > &BigUint::from(1u8), "Montgomery modulus must be odd and > 1");
        let limbs = n.to_u64_digits();
        let s = limbs.len();
        let n0 = limbs[0];
        // Newton iteration for n0^(-1) mod 2^64: each step doubles the correct bits
        let mut inv = n0;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n0.wrapping_mul(inv)));
        }
        let r2 = (BigUint::from(1u8) << (128 * s)) % n;
        Self { n: limbs, n0inv: inv.wrapping_neg(), r2: to_limbs(&r2, s) }
    }

    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn to_mont(&self, x: &BigUint) -> Limbs {
        let n = to_biguint(&self.n);
        self.mul(&to_limbs(&(x % n), self.len()), &self.r2)
    }

    #[cfg(test)]
    pub fn from_mont(&self, a: &[u64]) -> BigUint {
        let mut one = vec![0; self.len()];
        one[0] = 1;
        to_biguint(&self.mul(a, &one))
    }

    pub fn one(&self) -> Limbs {
        self.to_mont(&BigUint::from(1u8))
    }

    /// `a b R^(-1) mod n` (coarsely integrated operand scanning).
    pub fn mul(&self, a: &[u64], b: &[u64]) -> Limbs {
        let s = self.len();
        let n = &self.n;
        let mut t = vec![0u64; s + 2];
        for &bi in b.iter().take(s) {
            let bi = u128::from(bi);
            let mut c = 0u64;
            for j in 0..s {
                let x = u128::from(t[j]) + u128::from(a[j]) * bi + u128::from(c);
                t[j] = x as u64;
                c = (x >> 64) as u64;
            }
            let x = u128::from(t[s]) + u128::from(c);
            t[s] = x as u64;
            t[s + 1] = (x >> 64) as u64;

            let m = u128::from(t[0].wrapping_mul(self.n0inv));
            let x = u128::from(t[0]) + m * u128::from(n[0]);
            let mut c = (x >> 64) as u64;
            for j in 1..s {
                let x = u128::from(t[j]) + m * u128::from(n[j]) + u128::from(c);
                t[j - 1] = x as u64;
                c = (x >> 64) as u64;
            }
            let x = u128::from(t[s]) + u128::from(c);
            t[s - 1] = x as u64;
            t[s] = t[s + 1] + (x >> 64) as u64;
        }
        if t[s] != 0 || geq(&t[..s], n) {
            sub_in_place(&mut t[..s], n);
        }
        t.truncate(s);
        t
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Limbs {
        let mut r = a.to_vec();
        let carry = add_in_place(&mut r, b);
        if carry || geq(&r, &self.n) {
            sub_in_place(&mut r, &self.n);
        }
        r
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Limbs {
        let mut r = a.to_vec();
        if sub_in_place(&mut r, b) {
            add_in_place(&mut r, &self.n);
        }
        r
    }
}
