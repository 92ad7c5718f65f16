//! Run manifests written next to every output file.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub fingerprint: String,
    pub parameters: serde_json::Value,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, parameters: serde_json::Value) -> RunManifest {
        RunManifest {
            command: command.to_string(),
            version: quadint::VERSION.to_string(),
            fingerprint: quadint::SystemContext::build().fingerprint(),
            parameters,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }
}

/// `<output>.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}

pub fn write_manifest(output: &Path, manifest: &RunManifest) -> anyhow::Result<PathBuf> {
    let path = manifest_path(output);
    let text = serde_json::to_string_pretty(manifest)?;
    std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Reads `(a, b)` back from a trajectory's manifest, if present.
pub fn read_params(output: &Path) -> Option<(f64, f64)> {
    let text = std::fs::read_to_string(manifest_path(output)).ok()?;
    let v: serde_json::Value = serde_json::from_str(&text).ok()?;
    let p = v.get("parameters")?;
    Some((p.get("a_value")?.as_f64()?, p.get("b_value")?.as_f64()?))
}
