//! Exit codes, machine-readable error reports and artifact sinks.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad arguments, scenario or input contents.
    Validation(String),
    /// The computation itself broke down.
    Numerical(String),
    Io(String),
    /// verify-all ran but some criteria failed.
    CriteriaFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::CriteriaFailed(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Numerical(_) => "numerical",
            CliError::Io(_) => "io",
            CliError::CriteriaFailed(_) => "criteria_failed",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) | CliError::Io(m) | CliError::CriteriaFailed(m) => m,
        }
    }

    pub fn to_json(&self) -> String {
        json!({ "error": { "kind": self.kind(), "message": self.message(), "exit_code": self.exit_code() } })
            .to_string()
    }
}

impl From<hjwave::Error> for CliError {
    fn from(e: hjwave::Error) -> Self {
        use hjwave::Error as E;
        match e {
            E::NearZeroField { .. } | E::Numerical { .. } | E::Divergence { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

pub fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Where artifacts go: files in a directory, or the main table on stdout.
#[derive(Debug, Clone)]
pub struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    pub fn new(dir: Option<PathBuf>) -> Result<Self, CliError> {
        if let Some(d) = &dir {
            fs::create_dir_all(d).map_err(|e| CliError::Io(format!("{}: {e}", d.display())))?;
        }
        Ok(Self { dir })
    }

    fn write(&self, dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }

    /// The main text artifact: a file under the output directory, else stdout.
    pub fn primary(&self, name: &str, text: &str) -> Result<(), CliError> {
        match &self.dir {
            Some(d) => self.write(d, name, text.as_bytes()),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    /// Secondary artifacts are only written when an output directory is set.
    pub fn file(&self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        match &self.dir {
            Some(d) => self.write(d, name, bytes),
            None => Ok(()),
        }
    }

    pub fn summary(&self, value: &Value) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
        text.push('\n');
        self.file("summary.json", text.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(invalid("x").exit_code(), 2);
        assert_eq!(CliError::Numerical("x".into()).exit_code(), 3);
        assert_eq!(CliError::Io("x".into()).exit_code(), 4);
        assert_eq!(CliError::CriteriaFailed("x".into()).exit_code(), 1);
    }

    #[test]
    fn library_errors_map_by_kind() {
        let e: CliError = hjwave::Error::Divergence { step: 3, time: 0.3 }.into();
        assert_eq!(e.exit_code(), 3);
        let e: CliError = hjwave::Error::Stability("dt".into()).into();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn error_json_shape() {
        let v: Value = serde_json::from_str(&invalid("bad k").to_json()).unwrap();
        assert_eq!(v["error"]["kind"], "validation");
        assert_eq!(v["error"]["exit_code"], 2);
        assert_eq!(v["error"]["message"], "bad k");
    }
}
