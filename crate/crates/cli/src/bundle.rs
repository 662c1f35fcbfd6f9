//! Output directory writer: every file is hashed into `manifest.json`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultBundle {
    pub run_id: String,
    pub command: String,
    pub files: Vec<ManifestEntry>,
}

pub const MANIFEST: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes files under one directory, sequentially, recording their hashes.
pub struct BundleWriter {
    root: PathBuf,
    bundle: ResultBundle,
}

impl BundleWriter {
    /// The run id is the hash of the command name and the resolved config.
    pub fn create(root: &Path, command: &str, config_toml: &str) -> Result<Self> {
        std::fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        let run_id = sha256_hex(format!("{command}\n{config_toml}").as_bytes())[..16].to_string();
        let mut w = Self {
            root: root.to_path_buf(),
            bundle: ResultBundle {
                run_id,
                command: command.to_string(),
                files: vec![],
            },
        };
        w.write("config.toml", config_toml.as_bytes())?;
        Ok(w)
    }

    pub fn write(&mut self, rel: &str, bytes: &[u8]) -> Result<()> {
        let path = self.root.join(rel);
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        self.bundle.files.push(ManifestEntry {
            path: rel.to_string(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len(),
        });
        Ok(())
    }

    pub fn write_json<S: Serialize>(&mut self, rel: &str, value: &S) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).expect("json serializes");
        text.push('\n');
        self.write(rel, text.as_bytes())
    }

    pub fn write_csv<S: Serialize>(&mut self, rel: &str, rows: &[S], header: &[&str]) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(vec![]);
        w.write_record(header)?;
        for r in rows {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Config(format!("csv: {e}")))?;
        self.write(rel, &bytes)
    }

    pub fn finish(self) -> Result<ResultBundle> {
        let mut text = serde_json::to_string_pretty(&self.bundle).expect("json serializes");
        text.push('\n');
        let path = self.root.join(MANIFEST);
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(self.bundle)
    }
}

/// Re-hashes every manifest entry; returns the paths that do not match.
pub fn verify(root: &Path) -> Result<Vec<String>> {
    let path = root.join(MANIFEST);
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    let bundle: ResultBundle =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let mut bad = vec![];
    for f in &bundle.files {
        let p = root.join(&f.path);
        match std::fs::read(&p) {
            Ok(bytes) if sha256_hex(&bytes) == f.sha256 => {}
            _ => bad.push(f.path.clone()),
        }
    }
    Ok(bad)
}
