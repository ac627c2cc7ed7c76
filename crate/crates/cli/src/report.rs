//! Rendering of bound chains, exceptional scans and screening verdicts in
//! the three report formats.

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use cullen_lehmer::arith::Primality;
use cullen_lehmer::bounds::{group_digits, BoundChain, BoundStep};
use cullen_lehmer::exceptional::{CompositeCertificate, ExceptionalCandidate, UniquenessReport};
use cullen_lehmer::screen::{Factor, ScreenReport, Status, Summary, Verdict};

use crate::config::{Format, RunConfig};
use crate::error::CliError;

/// Header line of every JSONL report and results log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigRecord {
    pub config: RunConfig,
    pub config_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub config_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    #[serde(flatten)]
    pub step: BoundStep,
    pub config_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub n: u64,
    #[serde(flatten)]
    pub candidate: ExceptionalCandidate,
    pub config_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub certificate: CompositeCertificate,
    pub config_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSummaryRecord {
    pub final_form: Option<String>,
    pub halted: Option<String>,
    pub complete: bool,
    pub config_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalSummaryRecord {
    pub n_max: u64,
    pub n_with_candidates: usize,
    pub multi_candidate: Vec<u64>,
    pub violations: Vec<u64>,
    pub config_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreenSummaryRecord {
    pub summary: Summary,
    pub config_hash: String,
}

fn json_line<T: Serialize>(out: &mut String, value: &T) {
    out.push_str(&serde_json::to_string(value).expect("report records serialize"));
    out.push('\n');
}

fn config_comment(cfg: &RunConfig, hash: &str) -> String {
    let json = serde_json::to_string(cfg).expect("config serializes");
    format!("# config_hash={hash} config={json}\n")
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

// ---- bounds ---------------------------------------------------------------

pub const STEP_CSV_HEADER: [&str; 10] = [
    "label",
    "assumptions",
    "k_bound",
    "n_bound",
    "computed",
    "stated",
    "within_stated",
    "contradiction",
    "anchor",
    "config_hash",
];

pub fn step_csv_row(s: &BoundStep, hash: &str) -> Vec<String> {
    vec![
        s.label.clone(),
        s.assumptions.join(";"),
        opt(&s.k_bound),
        s.n_bound.to_string(),
        s.computed.to_string(),
        s.stated.to_string(),
        s.within_stated.to_string(),
        s.contradiction.to_string(),
        s.anchor.clone(),
        hash.to_string(),
    ]
}

pub fn step_from_csv_row(row: &csv::StringRecord) -> Result<(BoundStep, String), CliError> {
    let get = |i: usize| row.get(i).ok_or_else(|| CliError::Parse(format!("missing column {i}")));
    let parse_err = |e: &dyn std::fmt::Display| CliError::Parse(e.to_string());
    let assumptions = get(1)?;
    let k = get(2)?;
    Ok((
        BoundStep {
            label: get(0)?.to_string(),
            assumptions: if assumptions.is_empty() {
                Vec::new()
            } else {
                assumptions.split(';').map(String::from).collect()
            },
            k_bound: if k.is_empty() { None } else { Some(k.parse().map_err(|e| parse_err(&e))?) },
            n_bound: get(3)?.parse().map_err(|e| parse_err(&e))?,
            computed: get(4)?.parse().map_err(|e| parse_err(&e))?,
            stated: get(5)?.parse().map_err(|e| parse_err(&e))?,
            within_stated: get(6)?.parse().map_err(|e| parse_err(&e))?,
            contradiction: get(7)?.parse().map_err(|e| parse_err(&e))?,
            anchor: get(8)?.to_string(),
        },
        get(9)?.to_string(),
    ))
}

fn final_line(chain: &BoundChain) -> String {
    match (&chain.final_form, &chain.halted) {
        (Some(f), _) if chain.complete() => {
            format!("{}, n < {}, k ≤ {}", f.form, group_digits(f.n_max), f.k_max)
        }
        (_, Some(why)) => format!("chain incomplete: {why}"),
        _ => "chain incomplete: a computed constant exceeds its published value".to_string(),
    }
}

pub fn render_chain(chain: &BoundChain, cfg: &RunConfig, hash: &str) -> String {
    let mut out = String::new();
    match cfg.format {
        Format::Jsonl => {
            json_line(&mut out, &ConfigRecord { config: cfg.clone(), config_hash: hash.into() });
            for s in &chain.steps {
                json_line(&mut out, &StepRecord { step: s.clone(), config_hash: hash.into() });
            }
            json_line(
                &mut out,
                &ChainSummaryRecord {
                    final_form: chain.final_form.as_ref().map(|f| f.to_string()),
                    halted: chain.halted.clone(),
                    complete: chain.complete(),
                    config_hash: hash.into(),
                },
            );
        }
        Format::Csv => {
            out.push_str(&config_comment(cfg, hash));
            out.push_str(&csv_rows(&STEP_CSV_HEADER, chain.steps.iter().map(|s| step_csv_row(s, hash))));
        }
        Format::Human => {
            let _ = writeln!(out, "bound chain  min_omega={}  config={hash}", chain.min_omega);
            for (i, s) in chain.steps.iter().enumerate() {
                let k = s.k_bound.map(|k| format!("k ≤ {k}")).unwrap_or_else(|| "-".into());
                let mark = if s.within_stated { "ok" } else { "EXCEEDS" };
                let gate = if s.contradiction { "  [contradiction]" } else { "" };
                let _ = writeln!(
                    out,
                    "{:>2}. {:<32} computed {:<16} stated {:<12} {:<7} {:<7} n < {}{gate}",
                    i + 1,
                    s.label,
                    fmt_real(s.computed),
                    fmt_real(s.stated),
                    mark,
                    k,
                    group_digits(s.n_bound),
                );
                let _ = writeln!(out, "      {}  [{}]", s.anchor, s.assumptions.join(", "));
            }
            let _ = writeln!(out, "{}", final_line(chain));
        }
    }
    out
}

fn fmt_real(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        group_digits(x as u64)
    } else {
        format!("{x:.4}")
    }
}

// ---- exceptional ----------------------------------------------------------

pub fn render_exceptional(report: &UniquenessReport, cfg: &RunConfig, hash: &str) -> String {
    let mut out = String::new();
    let multi: Vec<u64> = report.multi_candidate().collect();
    let violations: Vec<u64> = report.violations.iter().map(|v| v.n).collect();
    match cfg.format {
        Format::Jsonl => {
            json_line(&mut out, &ConfigRecord { config: cfg.clone(), config_hash: hash.into() });
            for (n, cands) in &report.candidates {
                for c in cands {
                    json_line(
                        &mut out,
                        &CandidateRecord { n: *n, candidate: c.clone(), config_hash: hash.into() },
                    );
                }
            }
            for cert in &report.certificates {
                json_line(
                    &mut out,
                    &CertificateRecord { certificate: cert.clone(), config_hash: hash.into() },
                );
            }
            json_line(
                &mut out,
                &ExceptionalSummaryRecord {
                    n_max: report.n_max,
                    n_with_candidates: report.candidates.len(),
                    multi_candidate: multi,
                    violations,
                    config_hash: hash.into(),
                },
            );
        }
        Format::Csv => {
            out.push_str(&config_comment(cfg, hash));
            let rows = report.candidates.iter().flat_map(|(n, cands)| {
                cands.iter().map(move |c| {
                    vec![
                        n.to_string(),
                        c.w.to_string(),
                        c.rho.to_string(),
                        c.exponent.to_string(),
                        c.p.to_string(),
                        c.is_prime.to_string(),
                        c.bound_ok.to_string(),
                        hash.to_string(),
                    ]
                })
            });
            out.push_str(&csv_rows(
                &["n", "w", "rho", "exponent", "p", "is_prime", "bound_ok", "config_hash"],
                rows,
            ));
        }
        Format::Human => {
            let _ = writeln!(out, "exceptional candidates for 3 <= n <= {}  config={hash}", report.n_max);
            for (n, cands) in &report.candidates {
                for c in cands {
                    let p = if c.p.bits() <= 64 {
                        c.p.to_string()
                    } else {
                        format!("({} digits)", c.p.to_string().len())
                    };
                    let _ = writeln!(
                        out,
                        "n={n:<7} w={:<3} p={}*2^{}+1 = {p}  {}  bound {}",
                        c.w,
                        c.rho,
                        c.exponent,
                        if c.is_prime { "prime" } else { "composite" },
                        if c.bound_ok { "ok" } else { "VIOLATED" },
                    );
                }
            }
            for cert in &report.certificates {
                let _ = writeln!(
                    out,
                    "n={}: w={} candidate = Y^{} + 1 with Y + 1 = {} dividing it (paired with w={})",
                    cert.n, cert.w_small, cert.lambda, cert.divisor, cert.w_large
                );
            }
            let _ = writeln!(
                out,
                "{} n with candidates, {} with several",
                report.candidates.len(),
                multi.len()
            );
            let _ = writeln!(out, "{} uniqueness violations", violations.len());
        }
    }
    out
}

// ---- screening ------------------------------------------------------------

pub const VERDICT_CSV_HEADER: [&str; 11] = [
    "n",
    "status",
    "witness",
    "reason",
    "trial_limit_used",
    "rho_budget_used",
    "ecm_curves_used",
    "elapsed_us",
    "factors",
    "factorization_complete",
    "config_hash",
];

fn primality_str(p: Primality) -> &'static str {
    match p {
        Primality::Composite => "composite",
        Primality::Proven => "proven",
        Primality::Probable => "probable",
    }
}

fn encode_factors(fs: &[Factor]) -> String {
    fs.iter()
        .map(|f| format!("{}^{}:{}", f.p, f.e, primality_str(f.primality)))
        .collect::<Vec<_>>()
        .join(";")
}

fn decode_factors(s: &str) -> Result<Vec<Factor>, CliError> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(';')
        .map(|item| {
            let bad = || CliError::Parse(format!("bad factor {item:?}"));
            let (pe, pr) = item.split_once(':').ok_or_else(bad)?;
            let (p, e) = pe.split_once('^').ok_or_else(bad)?;
            let primality = match pr {
                "composite" => Primality::Composite,
                "proven" => Primality::Proven,
                "probable" => Primality::Probable,
                _ => return Err(bad()),
            };
            Ok(Factor {
                p: p.parse::<BigUint>().map_err(|_| bad())?,
                e: e.parse().map_err(|_| bad())?,
                primality,
            })
        })
        .collect()
}

pub fn verdict_csv_row(v: &Verdict, hash: &str) -> Vec<String> {
    vec![
        v.n.to_string(),
        v.status.to_string(),
        opt(&v.witness),
        v.reason.clone(),
        v.trial_limit_used.to_string(),
        v.rho_budget_used.to_string(),
        v.ecm_curves_used.to_string(),
        v.elapsed_us.to_string(),
        encode_factors(&v.factors),
        v.factorization_complete.to_string(),
        hash.to_string(),
    ]
}

pub fn verdict_from_csv_row(row: &csv::StringRecord) -> Result<(Verdict, String), CliError> {
    let get = |i: usize| row.get(i).ok_or_else(|| CliError::Parse(format!("missing column {i}")));
    let p = |e: &dyn std::fmt::Display| CliError::Parse(e.to_string());
    let witness = get(2)?;
    Ok((
        Verdict {
            n: get(0)?.parse().map_err(|e| p(&e))?,
            status: get(1)?.parse::<Status>().map_err(|e| p(&e))?,
            witness: if witness.is_empty() {
                None
            } else {
                Some(witness.parse().map_err(|e| p(&e))?)
            },
            reason: get(3)?.to_string(),
            trial_limit_used: get(4)?.parse().map_err(|e| p(&e))?,
            rho_budget_used: get(5)?.parse().map_err(|e| p(&e))?,
            ecm_curves_used: get(6)?.parse().map_err(|e| p(&e))?,
            elapsed_us: get(7)?.parse().map_err(|e| p(&e))?,
            factors: decode_factors(get(8)?)?,
            factorization_complete: get(9)?.parse().map_err(|e| p(&e))?,
        },
        get(10)?.to_string(),
    ))
}

pub fn render_screen(report: &ScreenReport, cfg: &RunConfig, hash: &str) -> String {
    let mut out = String::new();
    match cfg.format {
        Format::Jsonl => {
            json_line(&mut out, &ConfigRecord { config: cfg.clone(), config_hash: hash.into() });
            for v in &report.verdicts {
                json_line(&mut out, &VerdictRecord { verdict: v.clone(), config_hash: hash.into() });
            }
            json_line(
                &mut out,
                &ScreenSummaryRecord { summary: report.summary.clone(), config_hash: hash.into() },
            );
        }
        Format::Csv => {
            out.push_str(&config_comment(cfg, hash));
            out.push_str(&csv_rows(
                &VERDICT_CSV_HEADER,
                report.verdicts.iter().map(|v| verdict_csv_row(v, hash)),
            ));
        }
        Format::Human => {
            let _ = writeln!(
                out,
                "screen  trial_limit={} rho_budget={} ecm_curves={} min_omega={}  config={hash}",
                cfg.trial_limit, cfg.rho_budget, cfg.ecm_curves, cfg.min_omega
            );
            for v in &report.verdicts {
                let w = v.witness.as_ref().map(|w| {
                    let s = w.to_string();
                    if s.len() > 40 {
                        format!("({} digits)", s.len())
                    } else {
                        s
                    }
                });
                let _ = writeln!(
                    out,
                    "n={:<8} {:<15} witness={:<22} {}",
                    v.n,
                    v.status.as_str(),
                    w.unwrap_or_else(|| "-".into()),
                    v.reason
                );
            }
            let s = &report.summary;
            let counts: Vec<String> =
                Status::ALL.iter().map(|st| format!("{}={}", st.as_str(), s.count(*st))).collect();
            let _ = writeln!(out, "summary: {} n screened; {}", s.total, counts.join(" "));
            if s.undecided.is_empty() {
                let _ = writeln!(out, "undecided: none");
            } else {
                let list: Vec<String> = s.undecided.iter().map(u64::to_string).collect();
                let _ = writeln!(out, "undecided ({}): {}", s.undecided.len(), list.join(" "));
            }
        }
    }
    out
}
