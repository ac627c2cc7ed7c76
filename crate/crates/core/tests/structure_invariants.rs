mod common;

use cullen_lehmer::arith::{cullen_mod, primes_up_to};
use cullen_lehmer::structure::{
    cullen_value, decompose, fermat_number, fermat_primes, prime_shape, shape_divides,
    OddPartSignature, DEFAULT_MATERIALIZE_CAP,
};
use num_bigint::BigUint;
use num_traits::Zero;
use proptest::prelude::*;

proptest! {
    #[test]
    fn decomposition_recombines(n in 1u64..(1 << 40)) {
        let inst = decompose(n).unwrap();
        prop_assert_eq!(inst.n1 << inst.alpha, n);
        prop_assert_eq!(inst.n1 % 2, 1);
        match inst.n1_signature {
            OddPartSignature::One => prop_assert_eq!(inst.n1, 1),
            OddPartSignature::Power(sig) => prop_assert_eq!(sig.value(), inst.n1),
        }
    }

    #[test]
    fn value_residues(n in 1u64..4000, q in 3u64..1_000_000) {
        let v = cullen_value(n, DEFAULT_MATERIALIZE_CAP).unwrap();
        prop_assert_eq!(&v % q, BigUint::from(cullen_mod(n, q)));
    }

    #[test]
    fn shape_recombines(p_index in 1usize..5000) {
        let primes = primes_up_to(50_000);
        let p = BigUint::from(primes[p_index % primes.len()].max(3));
        let s = prime_shape(&p).unwrap();
        prop_assert!(s.m.bit(0));
        prop_assert_eq!((&s.m << s.a) + 1u8, p);
    }
}

#[test]
fn bit_lengths_match_values() {
    for n in 1..=1500u64 {
        let v = cullen_value(n, DEFAULT_MATERIALIZE_CAP).unwrap();
        assert_eq!(decompose(n).unwrap().bit_length, v.bits(), "n = {n}");
        assert_eq!(v, common::cullen(n));
    }
}

#[test]
fn shape_condition_is_divisibility() {
    // shape_divides(p, n)  <=>  (p - 1) | C_n - 1, for every odd prime p < 10^4
    let primes: Vec<u64> = primes_up_to(10_000).into_iter().filter(|&p| p > 2).collect();
    let shapes: Vec<_> = primes.iter().map(|&p| prime_shape(&BigUint::from(p)).unwrap()).collect();
    for n in 1..=500u64 {
        let inst = decompose(n).unwrap();
        let c_minus_1 = common::cullen(n) - 1u8;
        for (p, shape) in primes.iter().zip(&shapes) {
            let direct = (&c_minus_1 % (p - 1)).is_zero();
            assert_eq!(shape_divides(shape, &inst), direct, "n = {n}, p = {p}");
        }
    }
}

#[test]
fn cullen_numbers_are_one_mod_three_when_three_divides_n() {
    for n in (3..=100_000u64).step_by(3) {
        assert_eq!(cullen_mod(n, 3), 1, "n = {n}");
    }
    // and otherwise 3 | C_n exactly when n = 1, 2 (mod 6)
    for n in 1..=3000u64 {
        let expect = if n % 3 == 0 { 1 } else if n % 6 == 1 || n % 6 == 2 { 0 } else { 2 };
        assert_eq!(cullen_mod(n, 3), expect, "n = {n}");
    }
}

#[test]
fn fermat_primes_are_fermat_numbers() {
    for &(g, p) in fermat_primes() {
        assert_eq!(fermat_number(g), BigUint::from(p));
        assert!(cullen_lehmer::arith::is_prime_u64(p));
    }
    for g in 5..=6 {
        assert!(!cullen_lehmer::arith::is_prime(&fermat_number(g)));
    }
}
