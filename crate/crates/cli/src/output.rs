//! Output directory handling, CSV writing and run manifests.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::args::OutputArgs;
use crate::error::CliError;

pub const MANIFEST_NAME: &str = "manifest.json";

/// Floats in CSV output: 12 significant digits, scientific notation.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputFile {
    /// File name inside the output directory.
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    /// Arguments after the program name.
    pub command_line: Vec<String>,
    pub config: serde_json::Value,
    pub tool_version: String,
    pub started_unix_ms: u64,
    pub elapsed_ms: u64,
    pub outputs: Vec<OutputFile>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub summary: serde_json::Value,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{} is not a manifest: {e}", path.display())))
    }
}

/// Files of one run. Existing files are refused up front unless `force` is set.
pub struct OutputDir {
    dir: PathBuf,
    written: Vec<OutputFile>,
}

impl OutputDir {
    pub fn prepare(args: &OutputArgs, names: &[&str]) -> Result<Self, CliError> {
        let dir = args.out.clone();
        if !args.force {
            for name in names.iter().chain([&MANIFEST_NAME]) {
                let path = dir.join(name);
                if path.exists() {
                    return Err(CliError::Exists(path));
                }
            }
        }
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        Ok(Self {
            dir,
            written: Vec::new(),
        })
    }

    pub fn write_csv<R, I>(&mut self, name: &str, header: &[&str], rows: R) -> Result<(), CliError>
    where
        R: IntoIterator<Item = I>,
        I: IntoIterator<Item = String>,
    {
        // Encoding into memory cannot fail.
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).expect("in-memory CSV");
        for row in rows {
            w.write_record(row).expect("in-memory CSV");
        }
        let bytes = w.into_inner().expect("in-memory CSV");
        let path = self.dir.join(name);
        fs::write(&path, &bytes).map_err(|e| CliError::io(&path, e))?;
        self.written.push(OutputFile {
            path: name.to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        Ok(())
    }

    pub fn finish(
        self,
        ctx: &RunContext,
        config: serde_json::Value,
        summary: serde_json::Value,
    ) -> Result<RunManifest, CliError> {
        let manifest = RunManifest {
            command_line: ctx.argv.clone(),
            config,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix_ms: ctx.started_unix_ms,
            elapsed_ms: ctx.started.elapsed().as_millis() as u64,
            outputs: self.written,
            summary,
        };
        let path = self.dir.join(MANIFEST_NAME);
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))?;
        Ok(manifest)
    }
}

/// Invocation details recorded in the manifest.
pub struct RunContext {
    pub argv: Vec<String>,
    pub started: std::time::Instant,
    pub started_unix_ms: u64,
}

impl RunContext {
    pub fn new(argv: Vec<String>) -> Self {
        let started_unix_ms = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0);
        Self {
            argv,
            started: std::time::Instant::now(),
            started_unix_ms,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(0.5371931861929), "5.37193186193e-1");
        assert_eq!(sig12(0.0), "0.00000000000e0");
    }

    #[test]
    fn refuses_existing_manifest() {
        let t = tempfile::TempDir::new().unwrap();
        fs::write(t.path().join(MANIFEST_NAME), "{}").unwrap();
        let args = OutputArgs {
            out: t.path().to_path_buf(),
            force: false,
        };
        assert!(matches!(
            OutputDir::prepare(&args, &["a.csv"]),
            Err(CliError::Exists(_))
        ));
        let forced = OutputArgs {
            force: true,
            ..args
        };
        assert!(OutputDir::prepare(&forced, &["a.csv"]).is_ok());
    }
}
