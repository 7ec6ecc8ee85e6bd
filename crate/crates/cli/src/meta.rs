//! Sidecar `<output>.meta.json` files.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;

pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

pub fn write_sidecar(output: &Path, command: &str, parameters: &impl Serialize, results: Value) -> Result<(), CliError> {
    let doc = json!({
        "tool": "tpms",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "output": output.display().to_string(),
        "parameters": parameters,
        "results": results,
    });
    let path = sidecar_path(output);
    let text = serde_json::to_string_pretty(&doc).expect("metadata serialises");
    std::fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))
}
