//! Config-file loading: a flat JSON document whose keys mirror the
//! operating-point flags. Unknown keys are rejected; command-line flags
//! override anything given here.

use std::path::Path;

use serde::Deserialize;

use crate::error::{CliError, Result};

/// The documented file schema (see docs/config.md). Every key is optional;
/// whatever the file omits must come from flags or defaults.
#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub relays: Option<usize>,
    pub snr1_db: Option<f64>,
    pub mode: Option<ModeName>,
    pub inr_db: Option<f64>,
    pub sir_db: Option<f64>,
    pub theta: Option<f64>,
    pub eta: Option<f64>,
    pub gamma_th_db: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeName {
    NoInterference,
    FixedInr,
    FixedSir,
}

/// Reads and parses a config file. Parse failures carry the line/column
/// context from the JSON parser; range violations are reported separately
/// as validation errors during resolution.
pub fn load_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| CliError::Parse(format!("{}: {err}", path.display())))?;
    serde_json::from_str(&text).map_err(|err| CliError::Parse(format!("{}: {err}", path.display())))
}
