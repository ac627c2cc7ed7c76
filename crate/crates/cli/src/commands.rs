use std::fs;
use std::path::Path;

use cullen_lehmer::bounds::refine_chain;
use cullen_lehmer::exceptional::uniqueness_scan_with;
use cullen_lehmer::screen::{enumerate_2a3b, screen_set_with, Screener, Verdict};

use crate::config::{Cli, Command, RunConfig, ScreenArgs, SetKind};
use crate::error::CliError;
use crate::persist::ResultsLog;
use crate::report::{render_chain, render_exceptional, render_screen};

/// A rendered report plus the process exit code it implies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub report: String,
    pub exit_code: i32,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = RunConfig::from_cli(cli);
    match &cli.command {
        Command::Bounds => Ok(cmd_bounds(&cfg)),
        Command::Exceptional { .. } => cmd_exceptional(&cfg),
        Command::Screen(args) => cmd_screen(&cfg, args),
    }
}

/// Exit 0 when the chain reaches its final form with every computed
/// constant inside its published value, 1 otherwise.
pub fn cmd_bounds(cfg: &RunConfig) -> Outcome {
    let hash = cfg.hash(None);
    let chain = refine_chain(cfg.min_omega);
    Outcome {
        report: render_chain(&chain, cfg, &hash),
        exit_code: if chain.complete() { 0 } else { 1 },
    }
}

/// Exit 1 if some n has two or more prime exceptional candidates.
pub fn cmd_exceptional(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let hash = cfg.hash(None);
    let primality = cfg.screen_config().primality;
    let report = uniqueness_scan_with(cfg.n_max, &primality)?;
    Ok(Outcome {
        report: render_exceptional(&report, cfg, &hash),
        exit_code: if report.violations.is_empty() { 0 } else { 1 },
    })
}

pub fn read_values(path: &Path) -> Result<Vec<u64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<u64>()
                .map_err(|e| CliError::Parse(format!("{}: {tok:?}: {e}", path.display())))
        })
        .collect()
}

fn screen_values(args: &ScreenArgs) -> Result<(Vec<u64>, Option<Vec<u64>>), CliError> {
    match args.set {
        SetKind::Pow23 => Ok((enumerate_2a3b(args.n_max), None)),
        SetKind::Range => Ok(((1..=args.n_max).collect(), None)),
        SetKind::File => {
            let path = args
                .input
                .as_ref()
                .ok_or_else(|| CliError::Config("--set file needs --input".into()))?;
            let mut values = read_values(path)?;
            values.sort_unstable();
            values.dedup();
            Ok((values.clone(), Some(values)))
        }
    }
}

fn open_log(
    path: &Path,
    cfg: &RunConfig,
    hash: &str,
    args: &ScreenArgs,
) -> Result<(ResultsLog, Vec<Verdict>), CliError> {
    if !args.resume {
        return Ok((ResultsLog::create(path, cfg, hash, args.overwrite)?, Vec::new()));
    }
    match ResultsLog::resume(path, cfg, hash) {
        Err(CliError::HashMismatch { .. }) if args.overwrite => {
            Ok((ResultsLog::create(path, cfg, hash, true)?, Vec::new()))
        }
        other => other,
    }
}

/// Exit 0 when every n was refuted or found prime; undecided n give exit 1
/// unless `--allow-undecided`.
pub fn cmd_screen(cfg: &RunConfig, args: &ScreenArgs) -> Result<Outcome, CliError> {
    if args.trial_limit > cullen_lehmer::screen::MAX_TRIAL_LIMIT {
        return Err(CliError::Config(format!(
            "--trial-limit {} is above the supported maximum {}",
            args.trial_limit,
            cullen_lehmer::screen::MAX_TRIAL_LIMIT
        )));
    }
    let (values, file_values) = screen_values(args)?;
    let hash = cfg.hash(file_values.as_deref());
    let screener = Screener::new(cfg.screen_config());

    let report = match &args.output {
        Some(path) => {
            let (log, resumed) = open_log(path, cfg, &hash, args)?;
            screen_set_with(&values, &screener, cfg.workers, resumed, |v| log.append(v))?
        }
        None => screen_set_with(&values, &screener, cfg.workers, Vec::new(), |_| {
            Ok::<(), CliError>(())
        })?,
    };

    let undecided = !report.summary.undecided.is_empty();
    Ok(Outcome {
        report: render_screen(&report, cfg, &hash),
        exit_code: if undecided && !args.allow_undecided { 1 } else { 0 },
    })
}
