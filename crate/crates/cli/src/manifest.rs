use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub tool_version: String,
    pub wall_time_seconds: f64,
    pub output_paths: Vec<String>,
}

/// `<data file>.manifest.json`.
pub fn manifest_path(data: &Path) -> PathBuf {
    let mut name = data.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Writes `body` to `path` and a manifest next to it.
pub fn write_with_manifest(
    path: &Path,
    body: &str,
    command: &str,
    parameters: Value,
    wall_time_seconds: f64,
) -> io::Result<()> {
    fs::write(path, body)?;
    let manifest = RunManifest {
        command: command.to_string(),
        parameters,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_seconds,
        output_paths: vec![path.display().to_string()],
    };
    let text = serde_json::to_string_pretty(&manifest).map_err(io::Error::other)?;
    fs::write(manifest_path(path), text + "\n")
}
