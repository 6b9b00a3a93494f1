//! Number formatting and the output manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

/// 17 significant digits: enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManifestEntry {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Files written by one run, plus free-form notices and summary values.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Manifest {
    pub scenario: String,
    pub files: Vec<ManifestEntry>,
    pub notices: Vec<String>,
    pub summary: serde_json::Map<String, serde_json::Value>,
}

/// Writes files under one directory and records their hashes.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    manifest: Manifest,
}

impl OutputDir {
    pub fn create(root: impl Into<PathBuf>, scenario: &str) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        Ok(Self {
            root,
            manifest: Manifest {
                scenario: scenario.to_owned(),
                ..Manifest::default()
            },
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.root.join(name);
        fs::write(&path, bytes)?;
        self.manifest.files.retain(|e| e.file != name);
        self.manifest.files.push(ManifestEntry {
            file: name.to_owned(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len() as u64,
        });
        Ok(path)
    }

    pub fn notice(&mut self, text: impl Into<String>) {
        self.manifest.notices.push(text.into());
    }

    pub fn summary(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        self.manifest.summary.insert(key.to_owned(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    /// Writes `manifest.json` and returns the final manifest.
    pub fn finish(self) -> Result<Manifest> {
        let text = serde_json::to_string_pretty(&self.manifest)?;
        fs::write(self.root.join("manifest.json"), text + "\n")?;
        Ok(self.manifest)
    }
}
