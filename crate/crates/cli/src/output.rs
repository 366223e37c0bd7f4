//! Output files and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize)]
pub struct FileRecord {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Collects the files written by one experiment.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    files: Vec<FileRecord>,
}

impl OutputDir {
    pub fn create(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root).map_err(|source| CliError::Output {
            path: root.display().to_string(),
            source,
        })?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn files(&self) -> &[FileRecord] {
        &self.files
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> CliResult<()> {
        let path = self.root.join(name);
        fs::write(&path, bytes).map_err(|source| CliError::Output {
            path: path.display().to_string(),
            source,
        })?;
        self.files.retain(|f| f.path != name);
        self.files.push(FileRecord {
            path: name.to_string(),
            sha256: format!("{:x}", Sha256::digest(bytes)),
            bytes: bytes.len(),
        });
        Ok(())
    }

    /// CSV with a header row taken from the field names of `R`.
    pub fn write_csv<R: Serialize>(&mut self, name: &str, rows: &[R]) -> CliResult<()> {
        let mut out = csv::Writer::from_writer(Vec::new());
        for row in rows {
            out.serialize(row)?;
        }
        let bytes = out.into_inner().map_err(|e| CliError::Output {
            path: name.to_string(),
            source: e.into_error(),
        })?;
        self.write_bytes(name, &bytes)
    }

    pub fn write_json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_bytes(name, text.as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}
