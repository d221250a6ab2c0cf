use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde_json::{json, Value};
use thiserror::Error;

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Typed, valid, verified, found.
    Ok,
    /// Ill-typed, refuted, or a check failed; the report says why.
    Refuted,
    /// A resource bound was hit; the report holds the partial result.
    Exhausted,
}

impl Status {
    pub fn code(self) -> ExitCode {
        match self {
            Status::Ok => ExitCode::from(0),
            Status::Refuted => ExitCode::from(1),
            Status::Exhausted => ExitCode::from(2),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Refuted => "refuted",
            Status::Exhausted => "exhausted",
        }
    }
}

/// A human-readable and a machine-readable form of the same result.
#[derive(Debug)]
pub struct Report {
    pub status: Status,
    pub text: String,
    pub json: Value,
}

impl Report {
    pub fn new(status: Status, text: String, json: Value) -> Report {
        Report { status, text, json }
    }

    /// Prints the report and returns the exit code.
    pub fn emit(self, command: &str, as_json: bool) -> ExitCode {
        if as_json {
            let mut v = json!({ "command": command, "status": self.status.name() });
            if let (Value::Object(out), Value::Object(extra)) = (&mut v, self.json) {
                out.extend(extra);
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("JSON values serialize")
            );
        } else {
            print!("{}", self.text);
        }
        self.status.code()
    }
}

/// Failures that stop a command before it produces a report; all exit 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}{message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Resource(String),
}

impl CliError {
    /// `e` is prefixed with `path:` when it starts with a position and
    /// with `path: ` otherwise.
    pub fn parse(path: &Path, e: impl std::fmt::Display) -> CliError {
        let e = e.to_string();
        let sep = if e.starts_with(|c: char| c.is_ascii_digit()) {
            ":"
        } else {
            ": "
        };
        CliError::Parse {
            path: path.to_path_buf(),
            message: format!("{sep}{e}"),
        }
    }

    pub fn emit(self, command: &str, as_json: bool) -> ExitCode {
        if as_json {
            let kind = match self {
                CliError::Io { .. } => "io",
                CliError::Parse { .. } => "parse",
                CliError::Usage(_) => "usage",
                CliError::Resource(_) => "resource",
            };
            let v = json!({ "command": command, "status": "error", "kind": kind, "message": self.to_string() });
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("JSON values serialize")
            );
        } else {
            eprintln!("error: {self}");
        }
        ExitCode::from(2)
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
