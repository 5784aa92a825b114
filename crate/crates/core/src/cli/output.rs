//! Number formatting, CSV/JSON encoding, run manifests and atomic writes.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::CliError;

/// Rounds to 12 significant digits and prints the shortest decimal that
/// parses back to the rounded value. Negative zero prints as `0`.
pub fn fmt_sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        return "0".to_string();
    }
    rounded.to_string()
}

/// Provenance of one command invocation. Copies embedded in data files
/// leave out `duration_seconds` so that reruns are byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub parameters: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_seconds: Option<f64>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            tool_version: crate::VERSION.to_string(),
            parameters: BTreeMap::new(),
            duration_seconds: None,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn timed(&self, seconds: f64) -> Self {
        RunManifest {
            duration_seconds: Some(seconds),
            ..self.clone()
        }
    }
}

pub fn to_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::numerical(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Encodes a header and rows as CSV.
pub fn csv_bytes(header: &[String], rows: &[Vec<String>]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Files written together: each goes to a temporary file next to its
/// destination, and nothing is renamed into place until all are written.
#[derive(Default)]
pub struct OutputBatch {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl OutputBatch {
    pub fn add(&mut self, path: impl Into<PathBuf>, bytes: Vec<u8>) {
        self.files.push((path.into(), bytes));
    }

    pub fn commit(self) -> Result<(), CliError> {
        let mut staged = Vec::with_capacity(self.files.len());
        for (path, bytes) in self.files {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
                _ => PathBuf::from("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| CliError::io(&dir, e))?;
            tmp.write_all(&bytes).map_err(|e| CliError::io(&path, e))?;
            staged.push((tmp, path));
        }
        for (tmp, path) in staged {
            tmp.persist(&path).map_err(|e| CliError::io(&path, e.error))?;
        }
        Ok(())
    }
}

pub fn write_atomically(path: &Path, bytes: Vec<u8>) -> Result<(), CliError> {
    let mut batch = OutputBatch::default();
    batch.add(path, bytes);
    batch.commit()
}

/// `<path>.manifest.json`.
pub fn manifest_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    path.with_file_name(name)
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig12(1.0), "1");
        assert_eq!(fmt_sig12(-0.0), "0");
        assert_eq!(fmt_sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig12(-2.0 / 3.0), "-0.666666666667");
        assert_eq!(fmt_sig12(1.0 / 34.0), "0.0294117647059");
        assert_eq!(fmt_sig12(123456789.12345679), "123456789.123");
        assert_eq!(fmt_sig12(1.5e-7), "0.00000015");
    }

    #[test]
    fn formatting_is_idempotent() {
        for x in [0.1, 1.0 / 7.0, -1234.56789012345, 2.5e-13, 6.02e23] {
            let s = fmt_sig12(x);
            assert_eq!(fmt_sig12(s.parse().unwrap()), s);
        }
    }

    #[test]
    fn manifest_sidecar_name() {
        assert_eq!(
            manifest_path(Path::new("out/aff.csv")),
            PathBuf::from("out/aff.csv.manifest.json")
        );
    }
}
