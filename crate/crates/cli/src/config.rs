use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use cullen_lehmer::arith::PrimalityConfig;
use cullen_lehmer::bounds::DEFAULT_MIN_OMEGA;
use cullen_lehmer::screen::{ScreenConfig, DEFAULT_ECM_CURVES};
use cullen_lehmer::structure::DEFAULT_MATERIALIZE_CAP;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Human,
    Jsonl,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SetKind {
    /// All n = 2^a * 3^b <= n-max.
    Pow23,
    /// Every n in 1..=n-max.
    Range,
    /// Integers read from --input.
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Bounds,
    Exceptional,
    Screen,
}

/// Verify the Cullen/Lehmer reduction and screen candidate n.
///
/// Every flag can also be set through a `CULLEN_*` environment variable.
#[derive(Debug, Parser)]
#[command(name = "cullen-lehmer", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Report format written to stdout.
    #[arg(long, global = true, value_enum, default_value = "human", env = "CULLEN_FORMAT")]
    pub format: Format,

    /// Cohen–Hagis threshold: minimum number of distinct prime factors of a Lehmer number.
    #[arg(long, global = true, default_value_t = DEFAULT_MIN_OMEGA, env = "CULLEN_MIN_OMEGA")]
    pub min_omega: u64,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0, env = "CULLEN_WORKERS")]
    pub workers: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Replay the inequality chain down to n = 2^a * 3^b, n < 200,000.
    Bounds,
    /// List exceptional-prime candidates and check their uniqueness.
    Exceptional {
        #[arg(long, default_value_t = 10_000, env = "CULLEN_N_MAX")]
        n_max: u64,
    },
    /// Refute the Lehmer conditions for a set of n by witness search.
    Screen(ScreenArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ScreenArgs {
    #[arg(long, value_enum, default_value = "pow23", env = "CULLEN_SET")]
    pub set: SetKind,

    #[arg(long, default_value_t = 200_000, env = "CULLEN_N_MAX")]
    pub n_max: u64,

    /// File of whitespace-separated n values (for --set file).
    #[arg(long, env = "CULLEN_INPUT")]
    pub input: Option<PathBuf>,

    #[arg(long, default_value_t = 1_000_000, env = "CULLEN_TRIAL_LIMIT")]
    pub trial_limit: u64,

    #[arg(long, default_value_t = 1_000_000, env = "CULLEN_RHO_BUDGET")]
    pub rho_budget: u64,

    /// Elliptic curves per n for cofactors that rho leaves unsplit.
    #[arg(long, default_value_t = DEFAULT_ECM_CURVES, env = "CULLEN_ECM_CURVES")]
    pub ecm_curves: u32,

    /// Miller–Rabin rounds for inputs above 2^64.
    #[arg(long, default_value_t = 64, env = "CULLEN_MR_ROUNDS")]
    pub mr_rounds: u32,

    /// Largest n whose C_n may be built in full.
    #[arg(long, default_value_t = DEFAULT_MATERIALIZE_CAP, env = "CULLEN_MATERIALIZE_CAP")]
    pub materialize_cap: u64,

    /// Append-only JSONL results log, one verdict per line.
    #[arg(long, env = "CULLEN_OUTPUT")]
    pub output: Option<PathBuf>,

    /// Reuse verdicts already in --output.
    #[arg(long, env = "CULLEN_RESUME")]
    pub resume: bool,

    /// Replace an existing --output file instead of refusing.
    #[arg(long, env = "CULLEN_OVERWRITE")]
    pub overwrite: bool,

    /// Exit 0 even when some n stay undecided.
    #[arg(long, env = "CULLEN_ALLOW_UNDECIDED")]
    pub allow_undecided: bool,

    /// Record zero elapsed time so reports are byte-reproducible.
    #[arg(long, env = "CULLEN_NO_TIMINGS")]
    pub no_timings: bool,
}

/// Everything a run depends on. Embedded in every report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n_max: u64,
    pub trial_limit: u64,
    pub rho_budget: u64,
    pub ecm_curves: u32,
    pub min_omega: u64,
    pub workers: usize,
    pub output_path: Option<String>,
    pub format: Format,
    pub set: Option<SetKind>,
    pub input_path: Option<String>,
    pub mr_rounds: u32,
    pub materialize_cap: u64,
    pub record_timing: bool,
}

/// The fields that can change a result; workers, paths and report format
/// are excluded so a resume may change them.
#[derive(Serialize)]
struct HashedFields<'a> {
    command: CommandKind,
    n_max: u64,
    trial_limit: u64,
    rho_budget: u64,
    ecm_curves: u32,
    min_omega: u64,
    set: Option<SetKind>,
    input: Option<&'a [u64]>,
    mr_rounds: u32,
    materialize_cap: u64,
    record_timing: bool,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Self {
        let g = &cli.global;
        let base = RunConfig {
            command: CommandKind::Bounds,
            n_max: 0,
            trial_limit: 0,
            rho_budget: 0,
            ecm_curves: 0,
            min_omega: g.min_omega,
            workers: g.workers,
            output_path: None,
            format: g.format,
            set: None,
            input_path: None,
            mr_rounds: PrimalityConfig::default().mr_rounds,
            materialize_cap: DEFAULT_MATERIALIZE_CAP,
            record_timing: true,
        };
        match &cli.command {
            Command::Bounds => base,
            Command::Exceptional { n_max } => {
                RunConfig { command: CommandKind::Exceptional, n_max: *n_max, ..base }
            }
            Command::Screen(s) => RunConfig {
                command: CommandKind::Screen,
                n_max: s.n_max,
                trial_limit: s.trial_limit,
                rho_budget: s.rho_budget,
                ecm_curves: s.ecm_curves,
                output_path: s.output.as_ref().map(|p| p.display().to_string()),
                set: Some(s.set),
                input_path: s.input.as_ref().map(|p| p.display().to_string()),
                mr_rounds: s.mr_rounds,
                materialize_cap: s.materialize_cap,
                record_timing: !s.no_timings,
                ..base
            },
        }
    }

    pub fn screen_config(&self) -> ScreenConfig {
        ScreenConfig {
            trial_limit: self.trial_limit,
            rho_budget: self.rho_budget,
            ecm_curves: self.ecm_curves,
            min_omega: self.min_omega,
            materialize_cap: self.materialize_cap,
            primality: PrimalityConfig { mr_rounds: self.mr_rounds },
            record_timing: self.record_timing,
        }
    }

    /// First 16 hex digits of SHA-256 over the result-relevant fields, with
    /// the screened values folded in for `--set file`.
    pub fn hash(&self, file_values: Option<&[u64]>) -> String {
        let fields = HashedFields {
            command: self.command,
            n_max: self.n_max,
            trial_limit: self.trial_limit,
            rho_budget: self.rho_budget,
            ecm_curves: self.ecm_curves,
            min_omega: self.min_omega,
            set: self.set,
            input: file_values,
            mr_rounds: self.mr_rounds,
            materialize_cap: self.materialize_cap,
            record_timing: self.record_timing,
        };
        let canonical = serde_json::to_vec(&fields).expect("plain data serializes");
        let digest = Sha256::digest(&canonical);
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
