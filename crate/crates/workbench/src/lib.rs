//! `cdgaw`: a command-line workbench over `cdga-core`.
//!
//! Inputs are `cdgaw/1` JSON specs (or built-in presets); every command produces a
//! deterministic [`Report`] that renders either as text or as JSON.

pub mod commands;
pub mod expr;
pub mod presets;
pub mod report;
pub mod spec;

use thiserror::Error;

pub use commands::{run, Command, Flags, Input};
pub use report::Report;
pub use spec::{parse_spec, render_spec, Model, SpecFile};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WorkbenchError {
    #[error("parse error in {context} at line {line}, column {column}: {message}")]
    Parse { context: String, line: usize, column: usize, message: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("{0}")]
    Other(String),
}

impl WorkbenchError {
    pub fn exit_code(&self) -> i32 {
        match self {
            WorkbenchError::Parse { .. } => 3,
            WorkbenchError::Validation(_) => 2,
            WorkbenchError::Other(_) => 1,
        }
    }
}
