//! Browser bindings: a handful of small JSON-returning entry points for the
//! static page in `www/`. Every function returns a JSON string; failures
//! come back as `{"error": "..."}` rather than exceptions.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use cullen_lehmer::bounds::{self, gl3_crossover, k_lower, k_upper_gl3, n_threshold};
use cullen_lehmer::exceptional::exceptional_candidates;
use cullen_lehmer::screen::{ScreenConfig, Screener};
use cullen_lehmer::structure::decompose;

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).unwrap_or_else(|e| error_json(&e.to_string()))
}

fn error_json(msg: &str) -> String {
    serde_json::json!({ "error": msg }).to_string()
}

#[derive(Serialize)]
struct Curves {
    n: Vec<f64>,
    k_lower: Vec<f64>,
    k_upper: Vec<f64>,
    crossover: u64,
    /// `(k, n_threshold(k))` for the caps used by the chain.
    thresholds: Vec<(u64, u64)>,
}

/// Samples both bounds on `k` at `samples` log-spaced points of `[n_lo, n_hi]`.
#[wasm_bindgen]
pub fn bound_curves(n_lo: f64, n_hi: f64, samples: u32) -> String {
    if !(n_lo >= 3.0 && n_hi > n_lo && samples >= 2 && samples <= 10_000) {
        return error_json("need 3 <= n_lo < n_hi and 2 <= samples <= 10000");
    }
    let (a, b) = (n_lo.ln(), n_hi.ln());
    let n: Vec<f64> = (0..samples)
        .map(|i| (a + (b - a) * f64::from(i) / f64::from(samples - 1)).exp().round())
        .collect();
    let eval = |f: fn(u64) -> cullen_lehmer::Result<f64>| -> Vec<f64> {
        n.iter().map(|&x| f(x as u64).unwrap_or(f64::NAN)).collect()
    };
    to_json(&Curves {
        k_lower: eval(k_lower),
        k_upper: eval(k_upper_gl3),
        n,
        crossover: gl3_crossover(),
        thresholds: [15, 16, 17].iter().map(|&k| (k, n_threshold(k).unwrap_or(0))).collect(),
    })
}

/// The inequality chain for a given lower bound on the number of prime factors.
#[wasm_bindgen]
pub fn refine_chain_json(min_omega: u32) -> String {
    to_json(&bounds::refine_chain(u64::from(min_omega)))
}

#[derive(Serialize)]
struct CandidateView {
    n: u64,
    alpha: u64,
    n1: u64,
    candidates: Vec<cullen_lehmer::exceptional::ExceptionalCandidate>,
}

/// Exceptional-prime candidates `rho 2^((n + alpha)/w) + 1` for one `n`.
#[wasm_bindgen]
pub fn exceptional_candidates_json(n: u32) -> String {
    match decompose(u64::from(n)) {
        Ok(inst) if !inst.below_hypothesis() => to_json(&CandidateView {
            n: inst.n,
            alpha: inst.alpha,
            n1: inst.n1,
            candidates: exceptional_candidates(&inst),
        }),
        Ok(_) => error_json("n must be at least 3"),
        Err(e) => error_json(&e.to_string()),
    }
}

/// Witness search for one `C_n`. Kept to modest sizes: the page runs on the
/// main thread.
#[wasm_bindgen]
pub fn screen_one(n: u32, trial_limit: u32, rho_budget: u32, ecm_curves: u32) -> String {
    if n == 0 || n > 20_000 {
        return error_json("n must be between 1 and 20000 here");
    }
    let cfg = ScreenConfig {
        trial_limit: u64::from(trial_limit),
        rho_budget: u64::from(rho_budget),
        ecm_curves,
        record_timing: false,
        ..ScreenConfig::default()
    };
    match Screener::new(cfg).witness_search(u64::from(n)) {
        Ok(v) => to_json(&v),
        Err(e) => error_json(&e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn curves_cross_once() {
        let v = parse(bound_curves(1e3, 1e7, 200));
        let lo = v["k_lower"].as_array().unwrap();
        let hi = v["k_upper"].as_array().unwrap();
        let above: Vec<bool> =
            lo.iter().zip(hi).map(|(a, b)| a.as_f64().unwrap() > b.as_f64().unwrap()).collect();
        assert!(!above[0] && above[199]);
        assert_eq!(above.windows(2).filter(|w| w[0] != w[1]).count(), 1);
        let c = v["crossover"].as_u64().unwrap();
        assert!(c <= 1_400_000);
        assert_eq!(v["thresholds"][2][0], 17);
        assert!(parse(bound_curves(2.0, 10.0, 5))["error"].is_string());
    }

    #[test]
    fn chain_round_trips() {
        let v = parse(refine_chain_json(14));
        assert_eq!(v["steps"].as_array().unwrap().len(), 9);
        assert_eq!(v["final_form"]["k_max"], 15);
        assert!(parse(refine_chain_json(99))["final_form"].is_null());
    }

    #[test]
    fn candidates_for_27() {
        let v = parse(exceptional_candidates_json(27));
        assert_eq!(v["candidates"][0]["p"], "1537");
        assert_eq!(v["candidates"][0]["is_prime"], false);
        assert_eq!(parse(exceptional_candidates_json(10))["candidates"].as_array().unwrap().len(), 0);
        assert!(parse(exceptional_candidates_json(2))["error"].is_string());
    }

    #[test]
    fn screening_one_value() {
        let v = parse(screen_one(6, 1000, 1000, 0));
        assert_eq!((v["status"].as_str(), v["witness"].as_str()), (Some("REFUTED_SHAPE"), Some("11")));
        let v = parse(screen_one(141, 1000, 1000, 0));
        assert_eq!(v["status"], "PRIME_CN");
        assert!(parse(screen_one(0, 10, 10, 0))["error"].is_string());
    }
}
