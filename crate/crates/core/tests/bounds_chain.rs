mod common;

use cullen_lehmer::bounds::{
    check_two_thirds, fermat_gamma_cap, gl3_crossover, gl3_crossover_with_unit, k_lower,
    k_upper_gl3, log_ratio, log_ratio_within, mp_count_cap, n_threshold, q5_cap_below,
    q5_exclusion_cap, refine_chain, two_thirds_holds, Stated, REL_TOL,
};

#[test]
fn thresholds_are_tight() {
    for k in 3..=40u64 {
        let t = n_threshold(k).unwrap();
        let kf = k as f64;
        assert!(k_lower(t).unwrap() > kf, "k = {k}: k_lower({t}) <= k");
        assert!(k_lower(t - 1).unwrap() <= kf * (1.0 + REL_TOL), "k = {k}: not minimal");
        // n / ln n is increasing, so the bound persists past the threshold
        for step in [1, 10, 1000, 100_000] {
            assert!(k_lower(t + step).unwrap() > kf);
        }
    }
}

#[test]
fn thresholds_are_monotone() {
    let ts: Vec<u64> = (2..=60).map(|k| n_threshold(k).unwrap()).collect();
    assert!(ts.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn lower_bound_is_increasing_on_a_grid() {
    let mut prev = k_lower(3).unwrap();
    for n in (4..3_000_000u64).step_by(997) {
        let v = k_lower(n).unwrap();
        assert!(v >= prev, "k_lower drops at {n}");
        prev = v;
    }
}

#[test]
fn crossover_brackets() {
    let c = gl3_crossover();
    assert!(c <= 1_400_000);
    let g = |n: u64| {
        let nf = n as f64;
        nf.sqrt() / (9.0 * nf.ln().sqrt()) - 2.4 * nf.ln()
    };
    assert!(g(c) > 0.0 && g(c - 1) <= 0.0);
    let u = gl3_crossover_with_unit();
    assert!(u <= c);
    assert!(k_lower(u).unwrap() > k_upper_gl3(u).unwrap());
    assert!(k_lower(u - 1).unwrap() <= k_upper_gl3(u - 1).unwrap());
}

#[test]
fn count_caps_match_float_floors() {
    // away from exact powers the float ratio is safe to floor
    for n in [1_400_000u64, 260_000, 200_000, 59_048, 3_000_000] {
        for m in [3u64, 5, 7, 9, 15] {
            let cap = mp_count_cap(n, m).unwrap();
            assert_eq!(cap, log_ratio(n, m).floor() as u64, "({n}, {m})");
        }
    }
    // at 3^10 the float ratio comes out just below 10; the exact cap does not slip
    assert!(log_ratio(59_049, 3) < 10.0);
    assert_eq!(mp_count_cap(59_049, 3).unwrap(), 10);
    assert_eq!(mp_count_cap(59_048, 3).unwrap(), 9);
    assert!(mp_count_cap(100, 4).is_err());
}

#[test]
fn published_roundings_hold_exactly() {
    assert!(log_ratio_within(1_400_000, 3, Stated::new(129, 10), false));
    assert!(!log_ratio_within(1_400_000, 3, Stated::new(128, 10), false));
    assert!(log_ratio_within(260_000, 3, Stated::new(114, 10), false));
    assert!(log_ratio_within(260_000, 5, Stated::new(78, 10), true));
    assert!(q5_cap_below(200_000, 5, Stated::new(98, 10)));
    assert!(!q5_cap_below(200_000, 5, Stated::new(97, 10)));
    let cap = q5_exclusion_cap(200_000, 5).unwrap();
    assert!(cap < 9.8 && cap > 9.7);
    // larger q only shrink the cap
    assert!(q5_exclusion_cap(200_000, 7).unwrap() < cap);
    assert!(q5_exclusion_cap(200_000, 59).is_err());
}

#[test]
fn fermat_caps() {
    let g = fermat_gamma_cap(1_400_000).unwrap();
    assert_eq!((g.size_cap, g.effective_cap, g.fermat_count()), (20, 4, 5));
    // size cap = floor(log2(log2(C_n))) up to the +1
    for n in [3u64, 15, 16, 100, 65_520, 65_536, 1_000_000] {
        let bits = n + 64 - u64::from(n.leading_zeros());
        let g = fermat_gamma_cap(n).unwrap();
        assert!(1u64 << g.size_cap <= bits - 1 && bits - 1 < 1u64 << (g.size_cap + 1), "n = {n}");
    }
}

#[test]
fn two_thirds_agrees_with_cube_oracle() {
    for n in 3..=10_000u64 {
        let exact = check_two_thirds(n).unwrap();
        assert!(exact, "fails at n = {n}");
        if n % 97 == 0 || n < 200 {
            assert_eq!(common::two_thirds_oracle(n), Some(exact), "n = {n}");
        }
    }
    assert!(!two_thirds_holds(1));
    assert_eq!(common::two_thirds_oracle(1), Some(false));
    assert_eq!(common::two_thirds_oracle(2), Some(two_thirds_holds(2)));
    assert!(check_two_thirds(2).is_err());
}

#[test]
fn chain_gates_follow_min_omega() {
    let k_seq = |c: &cullen_lehmer::bounds::BoundChain| -> Vec<u64> {
        c.steps.iter().filter_map(|s| s.k_bound).collect()
    };
    let full = refine_chain(14);
    assert!(full.complete());
    assert_eq!(k_seq(&full), vec![17, 17, 16, 12, 15, 15, 13]);
    assert!(full.steps.iter().all(|s| s.within_stated));
    let f = full.final_form.as_ref().unwrap();
    assert_eq!((f.n_max, f.k_max), (200_000, 15));

    // 15 still leaves the surviving case open; 16 and up exclude it
    assert!(refine_chain(15).complete());
    for m in [16, 20, 99] {
        let c = refine_chain(m);
        assert!(!c.complete() && c.final_form.is_none(), "min_omega = {m}");
    }
    // below 13 the q >= 5 branch no longer contradicts; below 12 neither does 3 not dividing n
    for m in [2, 5, 12, 13] {
        assert!(!refine_chain(m).complete(), "min_omega = {m}");
    }
}
