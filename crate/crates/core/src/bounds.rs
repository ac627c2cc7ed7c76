//! The inequality engine behind the reduction to `n = 2^alpha * 3^beta`.
//!
//! Every number of distinct prime factors `k` of a Lehmer `C_n` with
//! `n1 = rho^w` satisfies `k > 1 + sqrt(n) / (9 sqrt(log n))` and the
//! older estimate `k < 2.4 log n`. Upper bounds on `k` come from counting
//! Fermat prime factors and prime factors `p` with `m_p > 1`; each new cap on
//! `k` turns back into a cap on `n`. Logarithms are natural throughout.
//!
//! Floating-point comparisons near a published constant use a relative
//! tolerance of `REL_TOL`; wherever the inequality can be raised to integer
//! powers it is re-checked exactly with big integers.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{cullen_mod, int_nth_root};
use crate::error::{Error, Result};
use crate::structure::fermat_primes;

pub const REL_TOL: f64 = 1e-9;

/// Cohen–Hagis: a Lehmer number has at least 14 distinct prime factors.
pub const DEFAULT_MIN_OMEGA: u64 = 14;

/// Largest `gamma` with a known Fermat prime `2^(2^gamma) + 1`.
pub const KNOWN_FERMAT_GAMMA_MAX: u32 = 4;

fn require_n(n: u64) -> Result<()> {
    if n < 3 {
        return Err(Error::BelowMinimum { what: "n", min: 3, got: n });
    }
    Ok(())
}

fn growth(n: f64) -> f64 {
    n.sqrt() / (9.0 * n.ln().sqrt())
}

/// `a > b` with ties inside the relative tolerance counted as "not greater".
pub fn clearly_greater(a: f64, b: f64) -> bool {
    a - b > REL_TOL * a.abs().max(b.abs())
}

/// `a < b` with the same tie rule.
pub fn clearly_less(a: f64, b: f64) -> bool {
    clearly_greater(b, a)
}

/// Lower bound on `k`: `1 + sqrt(n) / (9 sqrt(ln n))`.
pub fn k_lower(n: u64) -> Result<f64> {
    require_n(n)?;
    Ok(1.0 + growth(n as f64))
}

/// Upper bound on `k` taken as a premise: `2.4 ln n`.
pub fn k_upper_gl3(n: u64) -> Result<f64> {
    require_n(n)?;
    Ok(2.4 * (n as f64).ln())
}

/// `k_lower(n) > k`, checked both directly and in the rearranged form
/// `n > 81 (k - 1)^2 ln n`; a disagreement means a near-tie and counts as false.
fn lower_exceeds(n: u64, k: f64) -> bool {
    let direct = clearly_greater(1.0 + growth(n as f64), k);
    let nf = n as f64;
    let rearranged = clearly_greater(nf, 81.0 * (k - 1.0).powi(2) * nf.ln());
    direct && rearranged
}

/// Least `N` with `k_lower(n) > k_max` for every `n >= N`.
///
/// `n / ln n` is increasing for `n >= 3`, so the predicate is monotone and
/// bisection applies.
pub fn n_threshold(k_max: u64) -> Result<u64> {
    if k_max < 2 {
        return Err(Error::BelowMinimum { what: "k_max", min: 2, got: k_max });
    }
    let k = k_max as f64;
    Ok(bisect_first(3, |n| lower_exceeds(n, k)))
}

/// Least `N` with `sqrt(n) / (9 sqrt(ln n)) > 2.4 ln n` for all `n >= N`.
///
/// This drops the `1 +` of `k_lower`, so it is the weaker comparison and its
/// crossover bounds the one of `k_lower(n) < k_upper_gl3(n)` from above.
/// The difference is negative at 3, falls, then rises through zero exactly
/// once, so the predicate is false below the crossing and true above it.
pub fn gl3_crossover() -> u64 {
    bisect_first(3, |n| {
        let nf = n as f64;
        clearly_greater(growth(nf), 2.4 * nf.ln())
    })
}

/// Crossover of the strict form `k_lower(n) > k_upper_gl3(n)`.
pub fn gl3_crossover_with_unit() -> u64 {
    bisect_first(3, |n| {
        let nf = n as f64;
        clearly_greater(1.0 + growth(nf), 2.4 * nf.ln())
    })
}

/// First `n >= lo` where `pred` turns true, for a predicate that is false at
/// `lo` and stays true once it turns.
fn bisect_first(lo: u64, pred: impl Fn(u64) -> bool) -> u64 {
    debug_assert!(!pred(lo));
    let mut lo = lo;
    let mut hi = lo.max(4) * 2;
    while !pred(hi) {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Caps on `gamma` for a Fermat prime factor of `C_n` with `n <= n_bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaCap {
    /// Largest `gamma` with `2^(2^gamma) <= n_bound * 2^n_bound + 1`.
    pub size_cap: u32,
    /// `min(size_cap, 4)`: only five Fermat primes are known.
    pub effective_cap: u32,
}

impl GammaCap {
    /// Number of Fermat primes that can divide `C_n`.
    pub fn fermat_count(&self) -> u64 {
        fermat_primes().iter().filter(|(g, _)| *g <= self.effective_cap).count() as u64
    }
}

pub fn fermat_gamma_cap(n_bound: u64) -> Result<GammaCap> {
    require_n(n_bound)?;
    // bit length of n * 2^n + 1; 2^(2^g) <= X  iff  2^g <= bits(X) - 1
    let bits = n_bound + u64::from(64 - n_bound.leading_zeros());
    let size_cap = 63 - (bits - 1).leading_zeros();
    Ok(GammaCap { size_cap, effective_cap: size_cap.min(KNOWN_FERMAT_GAMMA_MAX) })
}

/// `floor(ln n_bound / ln min_m)`, computed exactly as the largest `j` with
/// `min_m^j <= n_bound`.
pub fn mp_count_cap(n_bound: u64, min_m: u64) -> Result<u64> {
    if min_m < 3 || min_m % 2 == 0 {
        return Err(Error::EvenOrSmallExponent(min_m));
    }
    let mut j = 0;
    let mut power = 1u128;
    while power * u128::from(min_m) <= u128::from(n_bound) {
        power *= u128::from(min_m);
        j += 1;
    }
    Ok(j)
}

/// The real ratio `ln n_bound / ln min_m`.
pub fn log_ratio(n_bound: u64, base: u64) -> f64 {
    (n_bound as f64).ln() / (base as f64).ln()
}

/// A decimal constant `num / den` as published (e.g. 12.9 = 129 / 10).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stated {
    pub num: u64,
    pub den: u64,
}

impl Stated {
    pub const fn new(num: u64, den: u64) -> Self {
        Self { num, den }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// Exact `ln x / ln base <= s` (or `<` when `strict`), via `x^den` vs `base^num`.
pub fn log_ratio_within(x: u64, base: u64, s: Stated, strict: bool) -> bool {
    let lhs = BigUint::from(x).pow(s.den as u32);
    let rhs = BigUint::from(base).pow(s.num as u32);
    if strict {
        lhs < rhs
    } else {
        lhs <= rhs
    }
}

/// `3 + ln(n_bound / q^3) / ln 3`: with `q | n1 = rho^w`, `w >= 3`, this caps
/// the number of prime factors `p` of `C_n` with `m_p > 1`.
pub fn q5_exclusion_cap(n_bound: u64, q: u64) -> Result<f64> {
    let cube = q.checked_pow(3).unwrap_or(u64::MAX);
    if cube > n_bound {
        return Err(Error::VacuousPrime { q, cube, bound: n_bound });
    }
    Ok(3.0 + ((n_bound as f64) / (cube as f64)).ln() / 3f64.ln())
}

/// Exact `3 + ln(n_bound / q^3) / ln 3 < s`, i.e.
/// `n_bound^den < q^(3 den) * 3^(num - 3 den)`.
pub fn q5_cap_below(n_bound: u64, q: u64, s: Stated) -> bool {
    let lhs = BigUint::from(n_bound).pow(s.den as u32);
    let three_part = s.num.checked_sub(3 * s.den);
    match three_part {
        None => false,
        Some(e) => {
            let rhs = BigUint::from(q).pow(3 * s.den as u32) * BigUint::from(3u8).pow(e as u32);
            lhs < rhs
        }
    }
}

/// `n 2^n / ((n 2^n)^(1/3) + 1) > 2^(2n/3)` decided exactly.
///
/// With `X = n 2^n` and `c = X^(1/3)` the claim is `X^3 > 2^(2n) (c + 1)^3`,
/// i.e. `X^3 - 2^(2n) (X + 1) > 3 * 2^(2n) (c^2 + c)`. `c` is bracketed by
/// scaled integer cube roots until the comparison is decided.
pub fn two_thirds_holds(n: u64) -> bool {
    assert!(n >= 1);
    let x = BigUint::from(n) << n;
    let pow2_2n = BigUint::one() << (2 * n);
    let lhs_full = x.pow(3);
    let base = &pow2_2n * (&x + 1u8);
    if lhs_full <= base {
        return false;
    }
    let diff = lhs_full - base;
    let weight = &pow2_2n * 3u8;
    let mut s = 0u64;
    loop {
        let scaled = &x << (3 * s);
        let root = int_nth_root(&scaled, 3);
        let unit = BigUint::one() << s;
        let r = &root.root;
        // c^2 + c scaled by 2^(2s): r^2 + r 2^s
        let lo = r * r + r * &unit;
        let lhs = &diff << (2 * s);
        if root.exact {
            return lhs > &weight * lo;
        }
        let r1 = r + 1u8;
        let hi = &r1 * &r1 + &r1 * &unit;
        if lhs > &weight * hi {
            return true;
        }
        if lhs <= &weight * lo {
            return false;
        }
        s += 16;
    }
}

/// Exact check of the two-thirds inequality, restricted to `n >= 3`.
pub fn check_two_thirds(n: u64) -> Result<bool> {
    require_n(n)?;
    Ok(two_thirds_holds(n))
}

/// One link of the reduction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundStep {
    pub label: String,
    pub assumptions: Vec<String>,
    /// Upper bound on `k` in force after this step.
    pub k_bound: Option<u64>,
    /// Upper bound on `n` in force after this step (published value).
    pub n_bound: u64,
    /// The value this step computes.
    pub computed: f64,
    /// The published constant it is compared against.
    pub stated: f64,
    /// `computed` respects `stated`, with an exact re-check where possible.
    pub within_stated: bool,
    /// The step's case contradicts `omega >= min_omega`.
    pub contradiction: bool,
    /// The claim this step reproduces.
    pub anchor: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalForm {
    pub form: String,
    /// Exclusive bound: `n < n_max`.
    pub n_max: u64,
    pub k_max: u64,
}

impl std::fmt::Display for FinalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}, n < {}, k <= {}", self.form, group_digits(self.n_max), self.k_max)
    }
}

pub fn group_digits(x: u64) -> String {
    let s = x.to_string();
    let mut out = String::new();
    for (i, ch) in s.chars().enumerate() {
        if i > 0 && (s.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundChain {
    pub min_omega: u64,
    pub steps: Vec<BoundStep>,
    /// Present only when every gate fired and the surviving case still
    /// allows `k >= min_omega`.
    pub final_form: Option<FinalForm>,
    pub halted: Option<String>,
}

impl BoundChain {
    pub fn complete(&self) -> bool {
        self.final_form.is_some() && self.steps.iter().all(|s| s.within_stated)
    }
}

/// Published constants the chain is checked against.
pub mod stated {
    use super::Stated;

    pub const CROSSOVER: u64 = 1_400_000;
    pub const MP3_FIRST: Stated = Stated::new(129, 10);
    pub const N_AFTER_17: u64 = 260_000;
    pub const MP3_SECOND: Stated = Stated::new(114, 10);
    pub const MP5: Stated = Stated::new(78, 10);
    pub const N_AFTER_15: u64 = 200_000;
    pub const Q5: Stated = Stated::new(98, 10);
    pub const GAMMA_SIZE: u32 = 20;
}

struct ChainBuilder {
    steps: Vec<BoundStep>,
}

impl ChainBuilder {
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        label: &str,
        assumptions: &[&str],
        k_bound: Option<u64>,
        n_bound: u64,
        computed: f64,
        stated: f64,
        within_stated: bool,
        contradiction: bool,
        anchor: String,
    ) {
        self.steps.push(BoundStep {
            label: label.to_string(),
            assumptions: assumptions.iter().map(|s| s.to_string()).collect(),
            k_bound,
            n_bound,
            computed,
            stated,
            within_stated,
            contradiction,
            anchor,
        });
    }
}

/// Replays the reduction with Cohen–Hagis threshold `min_omega`.
pub fn refine_chain(min_omega: u64) -> BoundChain {
    use stated::*;
    let mut b = ChainBuilder { steps: Vec::new() };
    let halt = |b: ChainBuilder, why: String| BoundChain {
        min_omega,
        steps: b.steps,
        final_form: None,
        halted: Some(why),
    };

    let crossover = gl3_crossover();
    b.push(
        "gl3-crossover",
        &["n1=rho^w", "k<2.4 log n"],
        None,
        CROSSOVER,
        crossover as f64,
        CROSSOVER as f64,
        crossover <= CROSSOVER,
        false,
        "sqrt(n)/(9 sqrt(log n)) < 2.4 log n  =>  n < 1.4e6".into(),
    );

    let gamma = fermat_gamma_cap(CROSSOVER).expect("bound >= 3");
    let fermat_all = gamma.fermat_count();
    b.push(
        "fermat-gamma",
        &["n<1.4e6"],
        None,
        CROSSOVER,
        f64::from(gamma.size_cap),
        f64::from(GAMMA_SIZE),
        gamma.size_cap <= GAMMA_SIZE && gamma.effective_cap == KNOWN_FERMAT_GAMMA_MAX,
        false,
        "gamma <= 20, so gamma in {0,1,2,3,4}".into(),
    );

    let mp3 = mp_count_cap(CROSSOVER, 3).expect("odd base");
    let k17 = fermat_all + mp3;
    b.push(
        "mp-count-base3",
        &["n<1.4e6"],
        Some(k17),
        CROSSOVER,
        log_ratio(CROSSOVER, 3),
        MP3_FIRST.value(),
        log_ratio_within(CROSSOVER, 3, MP3_FIRST, false),
        false,
        format!("log n/log 3 <= 12.9, k <= {fermat_all}+{mp3} = {k17}"),
    );

    let t17 = n_threshold(k17).expect("k >= 2");
    b.push(
        "threshold-k17",
        &[],
        Some(k17),
        N_AFTER_17,
        t17 as f64,
        N_AFTER_17 as f64,
        t17 <= N_AFTER_17,
        false,
        format!("sqrt(n)/(9 sqrt(log n)) < {}  =>  n < 260,000", k17 - 1),
    );

    let mp3b = mp_count_cap(N_AFTER_17, 3).expect("odd base");
    let k16 = fermat_all + mp3b;
    b.push(
        "mp-count-base3-refined",
        &["n<260000"],
        Some(k16),
        N_AFTER_17,
        log_ratio(N_AFTER_17, 3),
        MP3_SECOND.value(),
        log_ratio_within(N_AFTER_17, 3, MP3_SECOND, false),
        false,
        format!("log n/log 3 <= 11.4, k <= {k16}"),
    );

    let mp5 = mp_count_cap(N_AFTER_17, 5).expect("odd base");
    let k_not3 = fermat_all + mp5;
    let gate3 = k_not3 < min_omega;
    b.push(
        "branch-3-not-dividing-n",
        &["3 does not divide n", "n<260000"],
        Some(k_not3),
        N_AFTER_17,
        log_ratio(N_AFTER_17, 5),
        MP5.value(),
        log_ratio_within(N_AFTER_17, 5, MP5, true),
        gate3,
        format!("log 260,000/log 5 < 7.8, k <= {fermat_all}+{mp5} = {k_not3} < {min_omega}"),
    );
    if !gate3 {
        return halt(b, format!("k <= {k_not3} does not contradict omega >= {min_omega}"));
    }

    // 3 | n gives C_n = 1 mod 3, so the Fermat prime 3 drops out
    let three_excluded = cullen_mod(3, 3) == 1 && cullen_mod(6, 3) == 1;
    let fermat_without_3 = fermat_all - 1;
    let k15 = fermat_without_3 + mp3b;
    b.push(
        "three-divides-n",
        &["3|n", "n<260000"],
        Some(k15),
        N_AFTER_17,
        k15 as f64,
        15.0,
        three_excluded && k15 <= 15,
        false,
        format!("3|n, 3 does not divide C_n, k <= {fermat_without_3}+{mp3b} = {k15}"),
    );

    let t15 = n_threshold(k15).expect("k >= 2");
    b.push(
        "threshold-k15",
        &["3|n"],
        Some(k15),
        N_AFTER_15,
        t15 as f64,
        N_AFTER_15 as f64,
        t15 <= N_AFTER_15,
        false,
        format!("sqrt(n)/(9 sqrt(log n)) < {}  =>  n < 200,000", k15 - 1),
    );

    // worst admissible q is the smallest; q^3 > n_bound is vacuous
    let admissible: Vec<u64> = crate::arith::primes_up_to(crate::arith::iroot_u64(N_AFTER_15, 3))
        .into_iter()
        .filter(|&q| q >= 5)
        .collect();
    let worst = admissible
        .iter()
        .map(|&q| q5_exclusion_cap(N_AFTER_15, q).expect("q^3 <= bound"))
        .fold(f64::NEG_INFINITY, f64::max);
    let exact_ok = admissible.iter().all(|&q| q5_cap_below(N_AFTER_15, q, Q5));
    let mq = worst.floor() as u64;
    let k_q5 = mq + fermat_without_3;
    let gate5 = k_q5 < min_omega;
    b.push(
        "branch-prime-q-ge-5-divides-n",
        &["q|n, q>=5 prime", "n1=rho^w, w>=3", "3|n", "n<200000"],
        Some(k_q5),
        N_AFTER_15,
        worst,
        Q5.value(),
        exact_ok && clearly_less(worst, Q5.value()),
        gate5,
        format!("3+log(200,000/q^3)/log 3 < 9.8, k <= {mq}+{fermat_without_3} = {k_q5} < {min_omega}"),
    );
    if !gate5 {
        return halt(b, format!("k <= {k_q5} does not contradict omega >= {min_omega}"));
    }

    if k15 < min_omega {
        return halt(
            b,
            format!("the surviving case has k <= {k15} < {min_omega}; no final form to report"),
        );
    }

    BoundChain {
        min_omega,
        steps: b.steps,
        final_form: Some(FinalForm { form: "n = 2^α·3^β".into(), n_max: N_AFTER_15, k_max: k15 }),
        halted: None,
    }
}
