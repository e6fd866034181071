//! Text formats: band systems, reports, DOT graphs, checkpoints and the
//! bundled corpus.

pub mod corpus;
pub mod dot;
pub mod report;
pub mod system;

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::forest::ForestError;
use crate::isometry::BandSystem;
use crate::scalar::{NumberField, ScalarError};

pub use report::Report;
pub use system::{parse_system, write_system, SystemFile};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: field mismatch: {message}")]
    FieldMismatch { line: usize, message: String },
    #[error("line {line}: {source}")]
    Field { line: usize, source: ScalarError },
    #[error("forest: {0}")]
    Forest(ForestError),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

pub fn read_system(path: &Path) -> Result<SystemFile, InputError> {
    let text = fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_system(&text)
}

/// File name used for step `i` in a checkpoint directory.
pub fn checkpoint_name(i: usize) -> String {
    format!("step-{i}.bands")
}

/// Writes `step-<i>.bands` into `dir`.
pub fn write_checkpoint(dir: &Path, i: usize, s: &BandSystem, field: Option<&NumberField>) -> std::io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(checkpoint_name(i));
    fs::write(&path, write_system(s, field, Some(i)))?;
    Ok(path)
}
