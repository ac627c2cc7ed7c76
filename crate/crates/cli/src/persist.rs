//! Append-only JSONL results log: a config header line, then one verdict
//! per line, each flushed as soon as it is written.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use cullen_lehmer::screen::Verdict;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{ConfigRecord, VerdictRecord};

pub struct ResultsLog {
    path: PathBuf,
    hash: String,
    file: Mutex<File>,
}

impl ResultsLog {
    /// Starts a new log. An existing non-empty file is only replaced with
    /// `overwrite`.
    pub fn create(path: &Path, cfg: &RunConfig, hash: &str, overwrite: bool) -> Result<Self, CliError> {
        if !overwrite && path.metadata().map(|m| m.len() > 0).unwrap_or(false) {
            return Err(CliError::Config(format!(
                "{} already exists; pass --resume to continue it or --overwrite to replace it",
                path.display()
            )));
        }
        let mut file = File::create(path).map_err(|e| CliError::io(path.display(), e))?;
        let header = ConfigRecord { config: cfg.clone(), config_hash: hash.to_string() };
        let line = serde_json::to_string(&header).expect("config serializes");
        writeln!(file, "{line}").map_err(|e| CliError::io(path.display(), e))?;
        file.flush().map_err(|e| CliError::io(path.display(), e))?;
        Ok(Self { path: path.to_path_buf(), hash: hash.to_string(), file: Mutex::new(file) })
    }

    /// Reopens a log for appending and returns the verdicts it already holds.
    /// A torn final line (from a crash mid-write) is dropped.
    pub fn resume(path: &Path, cfg: &RunConfig, hash: &str) -> Result<(Self, Vec<Verdict>), CliError> {
        if !path.exists() {
            return Ok((Self::create(path, cfg, hash, false)?, Vec::new()));
        }
        let io = |e| CliError::io(path.display(), e);
        let reader = BufReader::new(File::open(path).map_err(io)?);
        let mut lines = reader.lines();
        let header: ConfigRecord = match lines.next() {
            Some(line) => serde_json::from_str(&line.map_err(io)?)
                .map_err(|e| CliError::Parse(format!("{} header: {e}", path.display())))?,
            None => return Ok((Self::create(path, cfg, hash, true)?, Vec::new())),
        };
        if header.config_hash != hash {
            return Err(CliError::HashMismatch {
                path: path.display().to_string(),
                found: header.config_hash,
                expected: hash.to_string(),
            });
        }
        let all: Vec<String> = lines.collect::<Result<_, _>>().map_err(io)?;
        let mut verdicts = Vec::new();
        for (i, line) in all.iter().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<VerdictRecord>(line) {
                Ok(rec) if rec.config_hash == hash => verdicts.push(rec.verdict),
                Ok(_) => {}
                Err(_) if i + 1 == all.len() => {}
                Err(e) => {
                    return Err(CliError::Parse(format!("{} line {}: {e}", path.display(), i + 2)))
                }
            }
        }

        let mut file = OpenOptions::new().read(true).append(true).open(path).map_err(io)?;
        // make sure the next record starts on its own line
        let len = file.metadata().map_err(io)?.len();
        if len > 0 {
            let mut last = [0u8; 1];
            file.seek(SeekFrom::Start(len - 1)).map_err(io)?;
            file.read_exact(&mut last).map_err(io)?;
            if last[0] != b'\n' {
                file.write_all(b"\n").map_err(io)?;
            }
        }
        Ok((Self { path: path.to_path_buf(), hash: hash.to_string(), file: Mutex::new(file) }, verdicts))
    }

    pub fn append(&self, v: &Verdict) -> Result<(), CliError> {
        let rec = VerdictRecord { verdict: v.clone(), config_hash: self.hash.clone() };
        let mut line = serde_json::to_string(&rec).expect("verdict serializes");
        line.push('\n');
        let mut file = self.file.lock().expect("results log lock");
        file.write_all(line.as_bytes()).map_err(|e| CliError::io(self.path.display(), e))?;
        file.flush().map_err(|e| CliError::io(self.path.display(), e))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}
