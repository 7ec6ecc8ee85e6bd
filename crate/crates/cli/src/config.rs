//! Optional TOML run file. Top-level keys set global flags and one table per
//! subcommand presets its flags; anything given on the command line wins.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Default)]
pub struct RunFile {
    table: toml::Table,
}

impl RunFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let table = text
            .parse::<toml::Table>()
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        Ok(Self { table })
    }

    pub fn jobs(&self) -> Result<Option<usize>, CliError> {
        match self.table.get("jobs") {
            None => Ok(None),
            Some(v) => v
                .as_integer()
                .and_then(|j| usize::try_from(j).ok())
                .map(Some)
                .ok_or_else(|| CliError::Usage("jobs must be a non-negative integer".into())),
        }
    }

    /// `flags` with unset fields filled from the `[section]` table.
    pub fn fill<T: Serialize + DeserializeOwned>(&self, section: &str, flags: T) -> Result<T, CliError> {
        let Some(preset) = self.table.get(section) else {
            return Ok(flags);
        };
        let bad = |e: String| CliError::Usage(format!("[{section}]: {e}"));
        let mut merged = serde_json::to_value(preset).map_err(|e| bad(e.to_string()))?;
        let given = serde_json::to_value(&flags).map_err(|e| bad(e.to_string()))?;
        let (Value::Object(base), Value::Object(over)) = (&mut merged, given) else {
            return Err(bad("expected a table".into()));
        };
        for (k, v) in over {
            if !v.is_null() {
                base.insert(k, v);
            }
        }
        serde_json::from_value(merged).map_err(|e| bad(e.to_string()))
    }
}
