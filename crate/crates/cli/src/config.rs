//! JSON config files layered under command-line flags.

use std::collections::BTreeSet;
use std::path::Path;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

pub const SEED_ENV: &str = "ELASTICA_SEED";

fn object(value: Value, what: &str) -> CliResult<Map<String, Value>> {
    match value {
        Value::Object(map) => Ok(map),
        _ => Err(CliError::Usage(format!("{what} must be a JSON object"))),
    }
}

/// Overlays the flags that were given onto the config file. Keys in the file
/// that no flag knows about are usage errors.
pub fn merge<T>(flags: &T, config: Option<&Path>) -> CliResult<T>
where
    T: Serialize + DeserializeOwned + Default,
{
    let known: BTreeSet<String> = object(serde_json::to_value(T::default())?, "arguments")?
        .into_iter()
        .map(|(k, _)| k)
        .collect();
    let mut merged = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            object(value, "config file")?
        }
        None => Map::new(),
    };
    if let Some(key) = merged.keys().find(|k| !known.contains(*k)) {
        return Err(CliError::Usage(format!("unknown config key `{key}`")));
    }
    for (k, v) in object(serde_json::to_value(flags)?, "arguments")? {
        if !v.is_null() {
            merged.insert(k, v);
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::Usage(e.to_string()))
}

/// Flag or config value, then `ELASTICA_SEED`, then zero.
pub fn resolve_seed(seed: Option<u64>) -> CliResult<u64> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text.trim().parse().map_err(|_| {
            CliError::Usage(format!("{SEED_ENV}={text:?} is not an unsigned integer"))
        }),
        Err(_) => Ok(0),
    }
}

pub fn required<T>(value: Option<T>, name: &str) -> CliResult<T> {
    value.ok_or_else(|| {
        CliError::Usage(format!(
            "missing required value `--{}`",
            name.replace('_', "-")
        ))
    })
}

/// Closed interval written `lo:hi` on the command line and `[lo, hi]` in
/// config files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeArg(pub f64, pub f64);

impl FromStr for RangeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        Ok(RangeArg(parse(lo)?, parse(hi)?))
    }
}
