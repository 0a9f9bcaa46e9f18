//! Run manifest: every run writes `run.json` with the command, resolved
//! parameters, crate version, and the complete tolerance registry.

use serde::Serialize;
use std::path::Path;

use crate::CliError;
use fbma_core::tolerances::Tolerances;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub version: &'static str,
    pub command: String,
    pub parameters: serde_json::Value,
    pub tolerances: Tolerances,
}

pub fn write_manifest(
    out_dir: &Path,
    command: &str,
    parameters: serde_json::Value,
) -> Result<(), CliError> {
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION"),
        command: command.to_string(),
        parameters,
        tolerances: Tolerances::default(),
    };
    write_json(out_dir, "run.json", &manifest)
}

pub fn write_json<T: Serialize>(out_dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Config(format!("{}: {e}", out_dir.display())))?;
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Config(format!("serialize {name}: {e}")))?;
    std::fs::write(out_dir.join(name), text + "\n")
        .map_err(|e| CliError::Config(format!("write {name}: {e}")))
}
