//! JSON report envelope and tabular rows for CSV export.
//!
//! Everything except `timing` is a pure function of the command, its
//! parameters and the seed, so two runs can be compared byte for byte after
//! [`Report::canonical_json`] drops the timing block.

use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::Result;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_NAME: &str = "posetdim";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for Tool {
    fn default() -> Self {
        Tool {
            name: TOOL_NAME,
            version: TOOL_VERSION,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    /// Seconds since the Unix epoch when the report was written.
    pub timestamp: u64,
    pub elapsed_ms: f64,
    /// Finer wall-clock measurements, such as per-criterion times.
    #[serde(skip_serializing_if = "Value::is_null")]
    pub breakdown: Value,
}

impl Timing {
    pub fn now(elapsed: Duration) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Timing {
            timestamp,
            elapsed_ms: elapsed.as_secs_f64() * 1e3,
            breakdown: Value::Null,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: Tool,
    pub command: String,
    pub params: Value,
    /// `true`/`false` for commands with a verdict, absent otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<bool>,
    pub result: Value,
    pub timing: Timing,
}

impl Report {
    pub fn new(
        command: impl Into<String>,
        params: impl Serialize,
        verdict: Option<bool>,
        result: impl Serialize,
        elapsed: Duration,
    ) -> Result<Self> {
        Ok(Report {
            schema_version: SCHEMA_VERSION,
            tool: Tool::default(),
            command: command.into(),
            params: serde_json::to_value(params)?,
            verdict,
            result: serde_json::to_value(result)?,
            timing: Timing::now(elapsed),
        })
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// The report without its timing block.
    pub fn canonical_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Value::Object(map) = &mut v {
            map.remove("timing");
        }
        Ok(serde_json::to_string_pretty(&v)?)
    }
}

/// One instance in a bound-versus-size table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub instance: String,
    pub elements: Option<usize>,
    /// Realiser size, absent for pure bound evaluations.
    pub size: Option<usize>,
    pub bound: f64,
    pub allowed: Option<u64>,
    pub certified: Option<bool>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_json_ignores_timing() {
        let a = Report::new("x", ("p", 1), Some(true), vec![1, 2], Duration::from_millis(5)).unwrap();
        let mut b = a.clone();
        b.timing = Timing {
            timestamp: 1,
            elapsed_ms: 99.0,
            breakdown: Value::Null,
        };
        assert_eq!(a.canonical_json().unwrap(), b.canonical_json().unwrap());
        assert_ne!(a.to_json_pretty().unwrap(), b.to_json_pretty().unwrap());
        let v: Value = serde_json::from_str(&a.to_json_pretty().unwrap()).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["tool"]["version"], TOOL_VERSION);
    }
}
