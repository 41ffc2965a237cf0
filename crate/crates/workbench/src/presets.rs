//! Built-in specs.

use crate::WorkbenchError;

pub const NAMES: [&str; 4] = ["heisenberg3", "paper-M", "paper-blowup", "synthetic-resolution"];

pub fn preset_text(name: &str) -> Result<&'static str, WorkbenchError> {
    match name {
        "heisenberg3" => Ok(include_str!("../presets/heisenberg3.json")),
        "paper-M" => Ok(include_str!("../presets/paper-M.json")),
        "paper-blowup" => Ok(include_str!("../presets/paper-blowup.json")),
        "synthetic-resolution" => Ok(include_str!("../presets/synthetic-resolution.json")),
        _ => Err(WorkbenchError::Other(format!("unknown preset `{name}` (known: {})", NAMES.join(", ")))),
    }
}
