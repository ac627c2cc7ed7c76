use cullen_lehmer::arith::{is_prime, power_signature};
use cullen_lehmer::exceptional::{
    certify_smaller, exceptional_candidates, odd_power_cofactor, uniqueness_scan,
    zero_case_relation,
};
use cullen_lehmer::structure::decompose;
use num_bigint::BigUint;
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn no_n_up_to_ten_thousand_has_two_prime_candidates() {
    let report = uniqueness_scan(10_000).unwrap();
    assert!(report.violations.is_empty());
    for (n, cands) in &report.candidates {
        let inst = decompose(*n).unwrap();
        let n_2n = BigUint::from(*n) << *n;
        for c in cands {
            // (p - 1)^w = n 2^n exactly
            assert_eq!((&c.p - 1u8).pow(c.w), n_2n, "n = {n}, w = {}", c.w);
            assert_eq!(c.is_prime, is_prime(&c.p));
            assert_eq!(inst.two_exponent() % u64::from(c.w), 0);
        }
        let certs = certify_smaller(&inst, cands);
        assert_eq!(certs.len(), cands.len().saturating_sub(1));
        for cert in &certs {
            let p = &cands.iter().find(|c| c.w == cert.w_small).unwrap().p;
            assert!(cert.verifies(p));
        }
    }
    assert!(report.candidates.iter().any(|(n, _)| *n == 27));
}

#[test]
fn several_candidates_are_certified() {
    // n = 3^9: w = 3 and w = 9 both qualify
    let inst = decompose(19_683).unwrap();
    let cands = exceptional_candidates(&inst);
    assert_eq!(cands.iter().map(|c| c.w).collect::<Vec<_>>(), vec![3, 9]);
    let certs = certify_smaller(&inst, &cands);
    assert_eq!(certs.len(), 1);
    assert!(certs[0].verifies(&cands[0].p));
    assert!(!cands[0].is_prime);
}

proptest! {
    #[test]
    fn odd_power_split(x in 2u64..1_000_000, u in (1u32..10).prop_map(|k| 2 * k + 1)) {
        let x = BigUint::from(x);
        let (d, c) = odd_power_cofactor(&x, u).unwrap();
        prop_assert_eq!(&d * &c, x.pow(u) + 1u8);
        prop_assert!(d > BigUint::from(2u8) && c > BigUint::from(1u8));
    }
}

#[test]
fn zero_case_relation_matches_brute_force() {
    // for n with n1 = rho^w, the relation (n + alpha) u = w a picks out
    // exactly the a with m 2^a = (n 2^n)^(u/w)
    for n in 3..3000u64 {
        let inst = decompose(n).unwrap();
        if inst.n1 == 1 {
            continue;
        }
        let sig = power_signature(inst.n1).unwrap();
        for w in (1..=sig.exponent).filter(|w| sig.exponent % w == 0) {
            let rho = sig.root_for(w).unwrap();
            if rho % 2 == 0 {
                continue;
            }
            for u in 1..=w {
                let m = BigUint::from(rho).pow(u);
                for a in 1..=inst.two_exponent() + 2 {
                    let holds = zero_case_relation(&inst, &m, a, rho, u, w).unwrap();
                    // (m 2^a)^w == (n 2^n)^u
                    let lhs = (&m << a).pow(w);
                    let rhs = (BigUint::from(n) << n).pow(u);
                    assert_eq!(holds, lhs == rhs, "n = {n}, w = {w}, u = {u}, a = {a}");
                }
            }
        }
    }
    let three = decompose(3).unwrap();
    assert!(zero_case_relation(&three, &BigUint::from(2u8), 3, 3, 1, 1).is_err());
    assert!(!BigUint::from(25u8).is_zero());
}
