//! Refuting the Lehmer necessary conditions for individual `C_n`.
//!
//! A Lehmer number `N` is composite, squarefree, has at least `min_omega`
//! distinct prime factors, and every prime `p | N` has `(p - 1) | (N - 1)`.
//! For each `n` the search looks for a prime that breaks one of these; when
//! none is found within budget the verdict is `Undecided`. No status can
//! express that a `C_n` *is* a Lehmer number.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    cullen_mod, cullen_mod_big, ecm_counted, int_nth_root, pollard_rho_counted, primality_with, primes_up_to,
    Primality, PrimalityConfig,
};
use crate::bounds::DEFAULT_MIN_OMEGA;
use crate::error::{Error, Result};
use crate::structure::{
    cullen_value, decompose, shape_divides, shape_of_odd_prime, CullenInstance,
    DEFAULT_MATERIALIZE_CAP,
};

/// All `2^a * 3^b <= n_max`, ascending.
pub fn enumerate_2a3b(n_max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p2 = 1u64;
    while p2 <= n_max {
        let mut v = p2;
        while v <= n_max {
            out.push(v);
            match v.checked_mul(3) {
                Some(next) => v = next,
                None => break,
            }
        }
        match p2.checked_mul(2) {
            Some(next) => p2 = next,
            None => break,
        }
    }
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    /// A prime `q | C_n` with `(q - 1)` not dividing `n 2^n`.
    RefutedShape,
    /// A prime `q` with `q^2 | C_n`.
    RefutedSquare,
    /// Complete factorization with fewer than `min_omega` distinct primes.
    RefutedOmega,
    /// `C_n` itself is prime.
    PrimeCn,
    Undecided,
}

impl Status {
    pub const ALL: [Status; 5] = [
        Status::RefutedShape,
        Status::RefutedSquare,
        Status::RefutedOmega,
        Status::PrimeCn,
        Status::Undecided,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Status::RefutedShape => "REFUTED_SHAPE",
            Status::RefutedSquare => "REFUTED_SQUARE",
            Status::RefutedOmega => "REFUTED_OMEGA",
            Status::PrimeCn => "PRIME_CN",
            Status::Undecided => "UNDECIDED",
        }
    }

    pub fn is_refutation(self) -> bool {
        self != Status::Undecided
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Status::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| format!("unknown status {s:?}"))
    }
}

/// A prime factor of `C_n` found during the search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    #[serde(with = "crate::decimal")]
    pub p: BigUint,
    pub e: u32,
    pub primality: Primality,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub n: u64,
    pub status: Status,
    #[serde(with = "crate::decimal::option")]
    pub witness: Option<BigUint>,
    pub reason: String,
    /// Largest trial prime bound actually scanned.
    pub trial_limit_used: u64,
    /// Rho iterations spent.
    pub rho_budget_used: u64,
    /// Elliptic curves tried.
    #[serde(default)]
    pub ecm_curves_used: u32,
    pub elapsed_us: u64,
    /// Prime factors found, ascending.
    pub factors: Vec<Factor>,
    pub factorization_complete: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreenConfig {
    pub trial_limit: u64,
    pub rho_budget: u64,
    /// Elliptic curves per `n`, tried on whatever rho leaves unsplit.
    pub ecm_curves: u32,
    pub min_omega: u64,
    pub materialize_cap: u64,
    pub primality: PrimalityConfig,
    /// When false every `elapsed_us` is 0, making reports byte-reproducible.
    pub record_timing: bool,
}

impl Default for ScreenConfig {
    fn default() -> Self {
        Self {
            trial_limit: 1_000_000,
            rho_budget: 1_000_000,
            ecm_curves: DEFAULT_ECM_CURVES,
            min_omega: DEFAULT_MIN_OMEGA,
            materialize_cap: DEFAULT_MATERIALIZE_CAP,
            primality: PrimalityConfig::default(),
            record_timing: true,
        }
    }
}

/// 25 curves at B1 = 2000 and 90 at B1 = 11000: good odds for prime
/// factors up to about 20 digits.
pub const DEFAULT_ECM_CURVES: u32 = 115;

/// Largest trial bound accepted; keeps `q^2` inside 64 bits.
pub const MAX_TRIAL_LIMIT: u64 = 1 << 32;

struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: Option<std::time::Instant>,
}

impl Stopwatch {
    fn start(enabled: bool) -> Self {
        #[cfg(not(target_arch = "wasm32"))]
        {
            Self { start: enabled.then(std::time::Instant::now) }
        }
        #[cfg(target_arch = "wasm32")]
        {
            let _ = enabled;
            Self {}
        }
    }

    fn micros(&self) -> u64 {
        #[cfg(not(target_arch = "wasm32"))]
        {
            self.start.map_or(0, |s| s.elapsed().as_micros() as u64)
        }
        #[cfg(target_arch = "wasm32")]
        {
            0
        }
    }
}

/// Witness search with the trial primes sieved once.
pub struct Screener {
    config: ScreenConfig,
    primes: Vec<u64>,
}

struct Search {
    inst: CullenInstance,
    watch: Stopwatch,
    trial_used: u64,
    rho_used: u64,
    ecm_used: u32,
    factors: Vec<Factor>,
}

impl Search {
    fn verdict(self, status: Status, witness: Option<BigUint>, reason: String, complete: bool) -> Verdict {
        let mut factors = self.factors;
        factors.sort_by(|a, b| a.p.cmp(&b.p));
        Verdict {
            n: self.inst.n,
            status,
            witness,
            reason,
            trial_limit_used: self.trial_used,
            rho_budget_used: self.rho_used,
            ecm_curves_used: self.ecm_used,
            elapsed_us: self.watch.micros(),
            factors,
            factorization_complete: complete,
        }
    }

    fn shape_reason(&self, q: &BigUint) -> String {
        let shape = shape_of_odd_prime(q);
        let inst = &self.inst;
        if shape.a > inst.two_exponent() {
            format!(
                "{q} divides C_{} but 2^{} does not divide n*2^n (n + alpha = {})",
                inst.n,
                shape.a,
                inst.two_exponent()
            )
        } else {
            format!("{q} divides C_{} but m = {} does not divide n1 = {}", inst.n, shape.m, inst.n1)
        }
    }

    /// Shape then square condition for a prime factor with multiplicity `e`.
    fn refutes(&self, q: &BigUint, e: u32) -> Option<(Status, String)> {
        let shape = shape_of_odd_prime(q);
        if !shape_divides(&shape, &self.inst) {
            return Some((Status::RefutedShape, self.shape_reason(q)));
        }
        if e >= 2 {
            return Some((Status::RefutedSquare, format!("{q}^2 divides C_{}", self.inst.n)));
        }
        None
    }
}

impl Screener {
    pub fn new(config: ScreenConfig) -> Self {
        let limit = config.trial_limit.min(MAX_TRIAL_LIMIT);
        Self { config, primes: primes_up_to(limit) }
    }

    pub fn config(&self) -> &ScreenConfig {
        &self.config
    }

    /// Scan primes `q <= trial_limit` by residue (shape then square), then
    /// test `C_n` for primality, then try a budgeted factorization of the
    /// cofactor. The first refutation found in ascending prime order wins.
    pub fn witness_search(&self, n: u64) -> Result<Verdict> {
        let inst = decompose(n)?;
        let cfg = &self.config;
        let mut s = Search {
            inst,
            watch: Stopwatch::start(cfg.record_timing),
            trial_used: 0,
            rho_used: 0,
            ecm_used: 0,
            factors: Vec::new(),
        };

        for &q in &self.primes {
            s.trial_used = q;
            if cullen_mod(n, q) != 0 {
                continue;
            }
            let qb = BigUint::from(q);
            let e = if cullen_mod(n, q * q) == 0 { 2 } else { 1 };
            if let Some((status, reason)) = s.refutes(&qb, e) {
                s.factors.push(Factor { p: qb.clone(), e, primality: Primality::Proven });
                return Ok(s.verdict(status, Some(qb), reason, false));
            }
            s.factors.push(Factor { p: qb, e: 1, primality: Primality::Proven });
        }
        s.trial_used = cfg.trial_limit.min(MAX_TRIAL_LIMIT);

        if n > cfg.materialize_cap {
            let reason = format!(
                "no witness up to {}; C_{n} has {} bits, beyond the materialization cap n <= {}",
                s.trial_used, s.inst.bit_length, cfg.materialize_cap
            );
            return Ok(s.verdict(Status::Undecided, None, reason, false));
        }

        let value = cullen_value(n, cfg.materialize_cap)?;
        let known: BigUint = s.factors.iter().map(|f| f.p.clone()).product();
        let cofactor = &value / &known;

        if s.factors.is_empty() {
            let pr = primality_with(&value, &cfg.primality);
            if pr.is_prime() {
                let reason = format!("C_{n} is prime ({pr:?}), and Lehmer numbers are composite");
                s.factors.push(Factor { p: value.clone(), e: 1, primality: pr });
                return Ok(s.verdict(Status::PrimeCn, Some(value), reason, true));
            }
        } else if cofactor.is_one() && s.factors.len() == 1 && s.factors[0].p == value {
            let reason = format!("C_{n} = {value} is prime, and Lehmer numbers are composite");
            return Ok(s.verdict(Status::PrimeCn, Some(value), reason, true));
        }

        let (found, unsplit) = self.split(&cofactor, &mut s.rho_used, &mut s.ecm_used);
        let mut grouped: BTreeMap<BigUint, (u32, Primality)> = BTreeMap::new();
        for (p, pr) in found {
            grouped.entry(p).or_insert((0, pr)).0 += 1;
        }
        for (p, (e, pr)) in &grouped {
            s.factors.push(Factor { p: p.clone(), e: *e, primality: *pr });
        }
        for (p, (e, _)) in &grouped {
            if let Some((status, reason)) = s.refutes(p, *e) {
                debug_assert!(cullen_mod_big(n, p).is_zero());
                let complete = unsplit.is_empty();
                return Ok(s.verdict(status, Some(p.clone()), reason, complete));
            }
        }

        if unsplit.is_empty() {
            let omega = s.factors.len() as u64;
            if omega < cfg.min_omega {
                let reason = format!(
                    "complete factorization has {omega} distinct primes, below {}",
                    cfg.min_omega
                );
                return Ok(s.verdict(Status::RefutedOmega, None, reason, true));
            }
            let reason = format!(
                "complete factorization with {omega} distinct primes passes every checked condition"
            );
            return Ok(s.verdict(Status::Undecided, None, reason, true));
        }

        let bits: Vec<String> = unsplit.iter().map(|c| c.bits().to_string()).collect();
        let reason = format!(
            "no witness up to {}; composite cofactor(s) of {} bits unsplit after {} rho iterations and {} curves",
            s.trial_used,
            bits.join("+"),
            s.rho_used,
            s.ecm_used
        );
        Ok(s.verdict(Status::Undecided, None, reason, false))
    }

    /// Splits `x` into primes as far as the rho and curve budgets allow.
    /// Returns the primes (with repetition) and whatever composites stayed
    /// unsplit.
    fn split(
        &self,
        x: &BigUint,
        rho_used: &mut u64,
        ecm_used: &mut u32,
    ) -> (Vec<(BigUint, Primality)>, Vec<BigUint>) {
        let mut primes = Vec::new();
        let mut unsplit = Vec::new();
        let mut stack = vec![x.clone()];
        while let Some(c) = stack.pop() {
            if c.is_one() {
                continue;
            }
            let pr = primality_with(&c, &self.config.primality);
            if pr.is_prime() {
                primes.push((c, pr));
                continue;
            }
            let sq = int_nth_root(&c, 2);
            if sq.exact {
                stack.push(sq.root.clone());
                stack.push(sq.root);
                continue;
            }
            let remaining = self.config.rho_budget.saturating_sub(*rho_used);
            let mut factor = None;
            if remaining > 0 {
                let rho = pollard_rho_counted(&c, remaining);
                *rho_used += rho.iterations.min(remaining);
                factor = rho.factor;
            }
            let curves_left = self.config.ecm_curves.saturating_sub(*ecm_used);
            if factor.is_none() && curves_left > 0 {
                let ecm = ecm_counted(&c, curves_left);
                *ecm_used += ecm.curves;
                factor = ecm.factor;
            }
            match factor {
                Some(d) => {
                    let (q, r) = c.div_rem(&d);
                    debug_assert!(r.is_zero());
                    stack.push(d);
                    stack.push(q);
                }
                None => unsplit.push(c),
            }
        }
        (primes, unsplit)
    }
}

/// Convenience form building a one-off screener.
pub fn witness_search(n: u64, trial_limit: u64, rho_budget: u64) -> Result<Verdict> {
    Screener::new(ScreenConfig { trial_limit, rho_budget, ..ScreenConfig::default() }).witness_search(n)
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub counts: BTreeMap<Status, usize>,
    pub undecided: Vec<u64>,
}

impl Summary {
    pub fn from_verdicts(verdicts: &[Verdict]) -> Self {
        let mut counts: BTreeMap<Status, usize> = Status::ALL.iter().map(|s| (*s, 0)).collect();
        let mut undecided = Vec::new();
        for v in verdicts {
            *counts.entry(v.status).or_default() += 1;
            if v.status == Status::Undecided {
                undecided.push(v.n);
            }
        }
        Self { total: verdicts.len(), counts, undecided }
    }

    pub fn count(&self, status: Status) -> usize {
        self.counts.get(&status).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreenReport {
    pub verdicts: Vec<Verdict>,
    pub summary: Summary,
}

/// Screens the distinct values of `n_values` with the default worker count.
pub fn screen_set(n_values: &[u64], config: &ScreenConfig) -> Result<ScreenReport> {
    let screener = Screener::new(*config);
    screen_set_with(n_values, &screener, 0, Vec::new(), |_| Ok::<(), Error>(()))
}

/// Batch driver. `resumed` verdicts are reused as-is; each newly computed
/// verdict is handed to `sink` as soon as it exists, and a sink error aborts
/// the run. `workers == 0` means one per core. Output is ascending in `n`.
pub fn screen_set_with<E, F>(
    n_values: &[u64],
    screener: &Screener,
    workers: usize,
    resumed: Vec<Verdict>,
    sink: F,
) -> std::result::Result<ScreenReport, E>
where
    E: From<Error> + Send,
    F: Fn(&Verdict) -> std::result::Result<(), E> + Sync,
{
    let wanted: BTreeSet<u64> = n_values.iter().copied().collect();
    let mut done: BTreeMap<u64, Verdict> =
        resumed.into_iter().filter(|v| wanted.contains(&v.n)).map(|v| (v.n, v)).collect();
    let todo: Vec<u64> = wanted.iter().copied().filter(|n| !done.contains_key(n)).collect();

    let run_one = |n: u64| -> std::result::Result<Verdict, E> {
        let v = screener.witness_search(n)?;
        sink(&v)?;
        Ok(v)
    };

    #[cfg(feature = "parallel")]
    let fresh: Vec<Verdict> = {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool");
        pool.install(|| todo.par_iter().map(|&n| run_one(n)).collect::<std::result::Result<_, E>>())?
    };
    #[cfg(not(feature = "parallel"))]
    let fresh: Vec<Verdict> = {
        let _ = workers;
        todo.iter().map(|&n| run_one(n)).collect::<std::result::Result<_, E>>()?
    };

    for v in fresh {
        done.insert(v.n, v);
    }
    let verdicts: Vec<Verdict> = done.into_values().collect();
    let summary = Summary::from_verdicts(&verdicts);
    Ok(ScreenReport { verdicts, summary })
}

/// Independent re-check of a verdict's claim with full big-integer
/// arithmetic on `C_n` (small `n` only).
pub fn recheck(v: &Verdict, min_omega: u64) -> bool {
    let Ok(value) = cullen_value(v.n, DEFAULT_MATERIALIZE_CAP) else {
        return false;
    };
    let value_minus_1 = &value - 1u8;
    match v.status {
        Status::RefutedShape => v.witness.as_ref().is_some_and(|q| {
            (&value % q).is_zero() && !(&value_minus_1 % (q - 1u8)).is_zero()
        }),
        Status::RefutedSquare => v.witness.as_ref().is_some_and(|q| (&value % (q * q)).is_zero()),
        Status::RefutedOmega => {
            let product: BigUint = v.factors.iter().map(|f| f.p.pow(f.e)).product();
            v.factorization_complete && product == value && (v.factors.len() as u64) < min_omega
        }
        Status::PrimeCn => v.witness.as_ref() == Some(&value),
        Status::Undecided => true,
    }
}

/// Machine-size witness, if it fits.
pub fn witness_u64(v: &Verdict) -> Option<u64> {
    v.witness.as_ref().and_then(|w| w.to_u64())
}
