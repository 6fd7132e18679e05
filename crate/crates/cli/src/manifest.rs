//! Run manifests: config echo plus input/output digests, one per stage.

use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use normbench_core::records::{sha256_file, sha256_hex, SCHEMA_VERSION};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub subcommand: String,
    pub config: serde_json::Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transport_calls: Option<u64>,
    pub duration_ms: u128,
}

pub struct ManifestBuilder {
    started: Instant,
    manifest: RunManifest,
}

impl ManifestBuilder {
    pub fn new(subcommand: &str, config: serde_json::Value) -> Self {
        ManifestBuilder {
            started: Instant::now(),
            manifest: RunManifest {
                schema_version: SCHEMA_VERSION,
                tool: "normbench",
                tool_version: env!("CARGO_PKG_VERSION"),
                subcommand: subcommand.to_string(),
                config,
                inputs: Vec::new(),
                outputs: Vec::new(),
                transport_calls: None,
                duration_ms: 0,
            },
        }
    }

    pub fn input_file(&mut self, path: &Path) -> anyhow::Result<&mut Self> {
        let sha256 = sha256_file(path).with_context(|| format!("digesting {}", path.display()))?;
        self.manifest.inputs.push(FileDigest {
            path: path.display().to_string(),
            sha256,
        });
        Ok(self)
    }

    /// For built-in inputs that exist as embedded text rather than files.
    pub fn input_embedded(&mut self, name: &str, text: &str) -> &mut Self {
        self.manifest.inputs.push(FileDigest {
            path: name.to_string(),
            sha256: sha256_hex(text.as_bytes()),
        });
        self
    }

    pub fn output_file(&mut self, path: &Path) -> anyhow::Result<&mut Self> {
        let sha256 = sha256_file(path).with_context(|| format!("digesting {}", path.display()))?;
        self.manifest.outputs.push(FileDigest {
            path: path.display().to_string(),
            sha256,
        });
        Ok(self)
    }

    pub fn transport_calls(&mut self, calls: u64) -> &mut Self {
        self.manifest.transport_calls = Some(calls);
        self
    }

    /// Writes `<manifest_path>` and returns the finished manifest.
    pub fn write(mut self, manifest_path: &Path) -> anyhow::Result<RunManifest> {
        self.manifest.duration_ms = self.started.elapsed().as_millis();
        let text = serde_json::to_string_pretty(&self.manifest)?;
        std::fs::write(manifest_path, text)
            .with_context(|| format!("writing {}", manifest_path.display()))?;
        Ok(self.manifest)
    }
}

/// Conventional manifest path for an output file: `<file>.manifest.json`.
pub fn manifest_path_for(output: &Path) -> std::path::PathBuf {
    let mut name = output
        .file_name()
        .map(|n| n.to_string_lossy().to_string())
        .unwrap_or_else(|| "output".to_string());
    name.push_str(".manifest.json");
    output.with_file_name(name)
}
