//! JSON scenario files and their merge with command-line flags.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::args::CommonArgs;
use crate::output::{invalid, read_text, CliError};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub command: String,
    #[serde(default)]
    pub parameters: Map<String, Value>,
    pub output_dir: Option<PathBuf>,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::parse(&read_text(path)?).map_err(|e| match e {
            CliError::Validation(m) => invalid(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| invalid(format!("scenario: {e}")))
    }

    /// Splits the parameter table into the common keys and the
    /// command-specific rest.
    pub fn split_parameters(&self) -> (Map<String, Value>, Map<String, Value>) {
        self.parameters
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .partition(|(k, _)| CommonArgs::KEYS.contains(&k.as_str()))
    }
}

/// Parses `scenario` strictly as `T`, then lets every flag that was given
/// override the scenario value. Unset flags are `null` or `false`.
pub fn overlay<T: Serialize + DeserializeOwned>(scenario: Map<String, Value>, flags: &T) -> Result<T, CliError> {
    serde_json::from_value::<T>(Value::Object(scenario.clone()))
        .map_err(|e| invalid(format!("scenario parameters: {e}")))?;
    let mut merged = scenario;
    if let Value::Object(given) = serde_json::to_value(flags).expect("flag structs serialize") {
        for (k, v) in given {
            if !(v.is_null() || v == Value::Bool(false)) {
                merged.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| invalid(format!("parameters: {e}")))
}
