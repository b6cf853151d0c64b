use std::fs;
use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;

use algebroid_forge::algebroid::AlgebroidError;
use algebroid_forge::conformal::ConformalError;
use algebroid_forge::liealg::LieError;
use algebroid_forge::va::VaError;
use algebroid_forge::SCHEMA_VERSION;

use crate::Format;

pub struct Context {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

/// Outcome of a command that produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The constructed bundle violates the criterion.
    Invalid,
}

impl Status {
    pub fn from_pass(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Invalid => 3,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: String, source: serde_json::Error },
    #[error("cannot write report: {0}")]
    Write(#[from] std::io::Error),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
    #[error(transparent)]
    Va(VaError),
    #[error(transparent)]
    Conformal(ConformalError),
}

impl From<VaError> for CliError {
    fn from(e: VaError) -> Self {
        CliError::Va(e)
    }
}

impl From<ConformalError> for CliError {
    fn from(e: ConformalError) -> Self {
        match e {
            ConformalError::Va(v) => CliError::Va(v),
            other => CliError::Conformal(other),
        }
    }
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Va(VaError::SaturationBudgetExceeded { .. } | VaError::WordCapExceeded { .. }) => 4,
            CliError::Va(VaError::IdealMeetsLowDegree { .. }) => 1,
            _ => 2,
        }
    }
}

/// A report that also has a short plain-text rendering.
pub trait Summary: Serialize {
    fn summary(&self) -> Vec<String>;
}

/// The echoed run configuration.
#[derive(Debug, Clone, Serialize, Default)]
pub struct RunEcho {
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cartan_type: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word_cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Serialize)]
struct Envelope<'a, R: Serialize> {
    schema_version: u32,
    command: &'a str,
    config: &'a RunEcho,
    report: &'a R,
}

pub fn emit<R: Summary>(ctx: &Context, command: &str, config: &RunEcho, report: &R) -> Result<(), CliError> {
    let body = match ctx.format {
        Format::Json => {
            let env = Envelope { schema_version: SCHEMA_VERSION, command, config, report };
            serde_json::to_string_pretty(&env).expect("reports serialize") + "\n"
        }
        Format::Text => {
            let mut lines = vec![format!("{command} (seed {})", config.seed)];
            lines.extend(report.summary().into_iter().map(|l| format!("  {l}")));
            lines.join("\n") + "\n"
        }
    };
    write_out(ctx, &body)
}

pub fn write_out(ctx: &Context, body: &str) -> Result<(), CliError> {
    match &ctx.out {
        Some(path) => fs::write(path, body)?,
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

pub fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}
