//! Shared report plumbing: schema header and JSON output.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl ToolInfo {
    pub fn current() -> Self {
        ToolInfo { name: env!("CARGO_PKG_NAME").into(), version: env!("CARGO_PKG_VERSION").into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub schema_version: u32,
    pub command: String,
    pub tool: ToolInfo,
}

impl Header {
    pub fn new(command: &str) -> Self {
        Header { schema_version: SCHEMA_VERSION, command: command.into(), tool: ToolInfo::current() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub polynomial: String,
    pub n: usize,
    pub d: u32,
}

impl InputEcho {
    pub fn of(f: &gitstab_core::HomogeneousPoly) -> Self {
        InputEcho { polynomial: f.to_string(), n: f.n(), d: f.d() }
    }
}

pub fn to_json<T: Serialize>(report: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(report).map_err(|e| CliError::internal(format!("serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes JSON to `path`, or to stdout when `path` is `-`.
pub fn emit_json<T: Serialize>(report: &T, path: &Path) -> CliResult<()> {
    let text = to_json(report)?;
    if path.as_os_str() == "-" {
        print!("{text}");
        return Ok(());
    }
    std::fs::write(path, text).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

pub fn timestamp_now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}
