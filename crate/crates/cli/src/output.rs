use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde::Serialize;

pub const WITNESS_SCHEMA: &str = "prorigid.witness/1";
pub const VERIFY_SCHEMA: &str = "prorigid.verify/1";
pub const OBSTRUCT_SCHEMA: &str = "prorigid.obstruct/1";
pub const PRIMES_SCHEMA: &str = "prorigid.primes/1";
pub const SELFTEST_SCHEMA: &str = "prorigid.selftest/1";

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn status(self) -> &'static str {
        match self {
            Outcome::Pass => "witnessed",
            Outcome::Fail => "refuted",
        }
    }
}

/// Invalid input; maps to exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<E: std::error::Error> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

pub fn exit_code(result: Result<Outcome, InputError>) -> ExitCode {
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Pretty JSON with a trailing newline, to `path` or standard output.
pub fn emit<T: Serialize>(doc: &T, path: Option<&Path>) -> Result<(), InputError> {
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text).map_err(|e| InputError(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn read_json(path: &PathBuf) -> Result<serde_json::Value, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{} is not valid JSON: {e}", path.display())))
}
