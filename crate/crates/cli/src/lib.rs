//! Command implementations and the JSON API shared by the `marketarch`
//! binary. The CLI and the HTTP handlers call the same functions here, so
//! both report identical numbers.

pub mod api;

use std::path::Path;

use marketarch_core::config::parse_config;
use marketarch_core::region::CompetitionRegion;
use marketarch_core::report::EvaluationReport;
use marketarch_core::scenario::{apply_override, ScenarioOverride};
use marketarch_core::{Error, ErrorKind, Model};
use serde_json::{Map, Number, Value};

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const OTHER: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const INFEASIBLE: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug)]
pub enum CliError {
    Io { path: String, source: std::io::Error },
    Model(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io { path, source } => write!(f, "{path}: {source}"),
            CliError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => exit::IO,
            CliError::Model(e) => match e.kind() {
                ErrorKind::Infeasible => exit::INFEASIBLE,
                ErrorKind::Input => exit::PARSE,
            },
        }
    }
}

pub fn load_model(path: &Path) -> Result<Model, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let config = parse_config(&text).map_err(|e| match e {
        Error::Syntax(msg) => CliError::Model(Error::Syntax(format!("{}: {msg}", path.display()))),
        other => CliError::Model(other),
    })?;
    Ok(config.model)
}

/// Base model, or the derived scenario when any override is set.
pub fn scenario_model(base: &Model, ov: &ScenarioOverride) -> Result<Model, Error> {
    if ov.is_empty() {
        Ok(base.clone())
    } else {
        apply_override(base, ov)
    }
}

pub fn evaluate_report(base: &Model, ov: &ScenarioOverride) -> Result<EvaluationReport, Error> {
    let eval = scenario_model(base, ov)?.evaluate()?;
    Ok(EvaluationReport::from(&eval))
}

pub fn region(base: &Model, ov: &ScenarioOverride) -> Result<CompetitionRegion, Error> {
    scenario_model(base, ov)?.region()
}

/// Builds an override from `key=value` pairs using the JSON field names
/// (or their short aliases such as `RM`, `rate`, `B`, `GS`).
pub fn parse_overrides(pairs: &[String]) -> Result<ScenarioOverride, Error> {
    let mut map = Map::new();
    for pair in pairs {
        let (key, value) = pair.split_once('=').ok_or_else(|| Error::Invalid {
            path: "--set".into(),
            reason: format!("expected KEY=VALUE, got \"{pair}\""),
        })?;
        let value = if let Ok(i) = value.parse::<u64>() {
            Value::Number(Number::from(i))
        } else if let Some(n) = value.parse::<f64>().ok().and_then(Number::from_f64) {
            Value::Number(n)
        } else {
            Value::String(value.to_string())
        };
        map.insert(key.trim().to_string(), value);
    }
    serde_json::from_value(Value::Object(map)).map_err(|e| Error::Invalid {
        path: "--set".into(),
        reason: e.to_string(),
    })
}

pub fn parse_number_list(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|v| {
            v.trim().parse::<f64>().map_err(|_| Error::Invalid {
                path: "--values".into(),
                reason: format!("\"{v}\" is not a number"),
            })
        })
        .collect()
}
