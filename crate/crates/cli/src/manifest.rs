//! Run manifests written next to every artifact.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Result;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileHash {
    pub path: String,
    pub sha256: String,
}

/// Time-dependent fields; everything else is a function of argv and inputs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Timing {
    pub timestamp_unix: u64,
    pub wall_seconds: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Vec<String>,
    pub tool_version: String,
    pub inputs: Vec<FileHash>,
    pub outputs: Vec<FileHash>,
    /// SHA-256 of this manifest serialized without `content_sha256` and `timing`.
    pub content_sha256: String,
    pub timing: Timing,
}

#[derive(Serialize)]
struct Hashed<'a> {
    command: &'a str,
    parameters: &'a [String],
    tool_version: &'a str,
    inputs: &'a [FileHash],
    outputs: &'a [FileHash],
}

impl RunManifest {
    pub fn new(
        command: &str,
        parameters: Vec<String>,
        inputs: Vec<FileHash>,
        outputs: Vec<FileHash>,
        wall_seconds: f64,
    ) -> Self {
        let tool_version = env!("CARGO_PKG_VERSION").to_string();
        let hashed = Hashed {
            command,
            parameters: &parameters,
            tool_version: &tool_version,
            inputs: &inputs,
            outputs: &outputs,
        };
        let content_sha256 = sha256_hex(&serde_json::to_vec(&hashed).expect("manifest serializes"));
        let timestamp_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Self {
            command: command.to_string(),
            parameters,
            tool_version,
            inputs,
            outputs,
            content_sha256,
            timing: Timing { timestamp_unix, wall_seconds },
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }
}

/// `<artifact>.manifest.json`.
pub fn manifest_path(artifact: &Path) -> PathBuf {
    let mut s = artifact.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn sha256_file(path: &Path) -> Result<String> {
    Ok(sha256_hex(&fs::read(path)?))
}
