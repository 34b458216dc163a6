use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Provenance record written next to each output artifact.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub flags: serde_json::Value,
    pub seed: Option<u64>,
    pub tool_version: String,
    /// SHA-256 of every input file, keyed by path.
    pub inputs: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    pub duration_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<serde_json::Value>,
}

pub struct ManifestBuilder {
    started: Instant,
    manifest: RunManifest,
}

impl ManifestBuilder {
    pub fn new(command: &str, flags: &impl Serialize, seed: Option<u64>) -> Result<Self> {
        Ok(ManifestBuilder {
            started: Instant::now(),
            manifest: RunManifest {
                command: command.to_owned(),
                flags: serde_json::to_value(flags)?,
                seed,
                tool_version: env!("CARGO_PKG_VERSION").to_owned(),
                inputs: BTreeMap::new(),
                outputs: Vec::new(),
                duration_seconds: 0.0,
                summary: None,
            },
        })
    }

    pub fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.manifest.inputs.insert(path.display().to_string(), sha256_hex(bytes));
    }

    pub fn output(&mut self, path: &Path) {
        self.manifest.outputs.push(path.display().to_string());
    }

    pub fn summary(&mut self, summary: &impl Serialize) -> Result<()> {
        self.manifest.summary = Some(serde_json::to_value(summary)?);
        Ok(())
    }

    /// Writes the manifest to `explicit`, or next to `out` when only that is set.
    pub fn finish(mut self, explicit: Option<&Path>, out: Option<&Path>) -> Result<()> {
        let Some(path) = manifest_path(explicit, out) else { return Ok(()) };
        self.manifest.duration_seconds = self.started.elapsed().as_secs_f64();
        let mut text = serde_json::to_string_pretty(&self.manifest)?;
        text.push('\n');
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }
}

fn manifest_path(explicit: Option<&Path>, out: Option<&Path>) -> Option<PathBuf> {
    explicit.map(Path::to_path_buf).or_else(|| {
        out.map(|o| {
            let mut name = o.as_os_str().to_owned();
            name.push(".manifest.json");
            PathBuf::from(name)
        })
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_matches_known_digest() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn default_path_sits_next_to_output() {
        assert_eq!(manifest_path(None, Some(Path::new("a/r.csv"))), Some(PathBuf::from("a/r.csv.manifest.json")));
        assert_eq!(manifest_path(Some(Path::new("m.json")), Some(Path::new("r.csv"))), Some(PathBuf::from("m.json")));
        assert_eq!(manifest_path(None, None), None);
    }
}
