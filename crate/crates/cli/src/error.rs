use std::path::PathBuf;

use spaceform_core::GeomError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed polygon file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

impl CliError {
    /// Short machine-readable kind, e.g. `NotConvex` or `Input`.
    pub fn kind(&self) -> String {
        match self {
            CliError::Read { .. } => "Read".into(),
            CliError::Write { .. } => "Write".into(),
            CliError::Json(_) => "Json".into(),
            CliError::Input(_) => "Input".into(),
            CliError::Geom(e) => {
                let dbg = format!("{e:?}");
                dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Geom").to_string()
            }
        }
    }

    /// Tolerance breaches are check failures; everything else is bad input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Geom(GeomError::ToleranceExceeded { .. }) => 2,
            _ => 1,
        }
    }
}
