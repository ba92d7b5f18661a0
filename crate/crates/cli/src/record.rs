//! Run records: one JSON object per invocation.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliResult;
use crate::export::write_atomic;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub version: String,
    pub command: String,
    /// Fully resolved configuration, seed included.
    pub config: Value,
    pub metrics: Value,
    pub outputs: Vec<String>,
    pub duration_s: f64,
}

impl RunRecord {
    pub fn new(command: &str, config: Value) -> Self {
        RunRecord {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            metrics: Value::Null,
            outputs: Vec::new(),
            duration_s: 0.0,
        }
    }

    pub fn to_json(&self) -> CliResult<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        write_atomic(path, self.to_json()?.as_bytes())
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| crate::error::CliError::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}
