use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};
use crate::invocation::Invocation;
use crate::table::write_atomic;

/// Record of a successful run, written next to its primary output.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub parameters: &'a Invocation,
    /// Values fixed at run time, e.g. an automatically chosen time step.
    pub derived: &'a BTreeMap<String, f64>,
    /// SHA-256 of the canonical JSON form of `parameters`.
    pub config_sha256: String,
    pub outputs: Vec<String>,
    pub duration_seconds: f64,
}

impl<'a> RunManifest<'a> {
    pub fn new(
        inv: &'a Invocation,
        derived: &'a BTreeMap<String, f64>,
        outputs: &[PathBuf],
        duration_seconds: f64,
    ) -> Result<Self> {
        Ok(RunManifest {
            tool: "polysound",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: inv.subcommand().name(),
            parameters: inv,
            derived,
            config_sha256: parameter_hash(inv)?,
            outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
            duration_seconds,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::usage(format!("manifest: {e}")))?;
        text.push('\n');
        write_atomic(path, text.as_bytes())
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".manifest.json");
    PathBuf::from(name)
}

pub fn parameter_hash(inv: &Invocation) -> Result<String> {
    let canonical =
        serde_json::to_vec(inv).map_err(|e| CliError::usage(format!("manifest: {e}")))?;
    Ok(Sha256::digest(&canonical)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}
