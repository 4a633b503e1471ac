use std::path::{Path, PathBuf};

use serde::Serialize;

/// Everything needed to reproduce a run. Contains no timestamps, so equal
/// manifests accompany bitwise-equal outputs.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    pub command: &'static str,
    pub parameters: serde_json::Value,
    pub config: Option<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub seed: Option<u64>,
    pub version: &'static str,
}

impl RunManifest {
    pub fn new(command: &'static str, parameters: serde_json::Value) -> Self {
        Self {
            command,
            parameters,
            config: None,
            outputs: Vec::new(),
            seed: None,
            version: env!("CARGO_PKG_VERSION"),
        }
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut text = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        text.push('\n');
        std::fs::write(path, text)
    }
}
