//! Run manifests: everything needed to replay a run bit-exactly.

use anyhow::{Context, Result};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Debug, Serialize)]
pub struct RunManifest<C: Serialize> {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub timestamp_unix_s: u64,
    /// Fully resolved parameter record; replaying the command with these
    /// values reproduces every data file byte for byte.
    pub config: C,
    pub outputs: Vec<String>,
}

impl<C: Serialize> RunManifest<C> {
    pub fn new(command: &str, seed: u64, config: C, outputs: &[&Path]) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            timestamp_unix_s: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            config,
            outputs: outputs
                .iter()
                .map(|p| p.display().to_string())
                .collect(),
        }
    }
}

/// Write every (path, content) pair, then the manifest alongside them.
/// Callers compute all contents before calling, so failures cannot leave a
/// partial result set behind.
pub fn write_outputs<C: Serialize>(
    out_dir: &Path,
    files: &[(PathBuf, String)],
    manifest: &RunManifest<C>,
) -> Result<()> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))?;
    for (path, content) in files {
        std::fs::write(path, content)
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    let manifest_path = out_dir.join("manifest.json");
    let text = serde_json::to_string_pretty(manifest).context("manifest serialization")?;
    std::fs::write(&manifest_path, text)
        .with_context(|| format!("cannot write {}", manifest_path.display()))?;
    Ok(())
}
