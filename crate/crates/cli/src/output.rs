use std::ffi::OsString;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use tempfile::NamedTempFile;

use crate::CliError;

/// Reproduction record written next to every output file.
#[derive(Debug, Clone, Serialize)]
pub struct Sidecar {
    pub subcommand: &'static str,
    pub params: Value,
    pub seed: Option<u64>,
    pub method: Option<String>,
    pub version: &'static str,
    pub fallbacks: Vec<String>,
}

impl Sidecar {
    pub fn new(subcommand: &'static str, params: Value) -> Self {
        Self {
            subcommand,
            params,
            seed: None,
            method: None,
            version: env!("CARGO_PKG_VERSION"),
            fallbacks: Vec::new(),
        }
    }
}

pub fn is_stdout(path: &Path) -> bool {
    path.as_os_str() == "-"
}

/// `<file>.json`, e.g. `curve.csv` → `curve.csv.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name: OsString = path.file_name().map(OsString::from).unwrap_or_default();
    name.push(".json");
    path.with_file_name(name)
}

fn temp_beside(path: &Path) -> std::io::Result<NamedTempFile> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    tempfile::Builder::new().prefix(".circfrac-").tempfile_in(dir)
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Compute(format!("{}: {e}", path.display()))
}

/// Writes `body` to `path` (or to `stdout` for `-`) together with its
/// sidecar. Both files are staged in the target directory and renamed into
/// place only after every byte has been written.
pub fn emit<F>(path: &Path, stdout: &mut dyn Write, sidecar: &Sidecar, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> circfrac::Result<()>,
{
    if is_stdout(path) {
        let mut buf = Vec::new();
        body(&mut buf).map_err(|e| CliError::Compute(e.to_string()))?;
        return stdout.write_all(&buf).map_err(io_err(path));
    }
    let side_path = sidecar_path(path);
    let mut data = temp_beside(path).map_err(io_err(path))?;
    {
        let mut w = BufWriter::new(data.as_file_mut());
        body(&mut w).map_err(|e| CliError::Compute(e.to_string()))?;
        w.flush().map_err(io_err(path))?;
    }
    let mut side = temp_beside(&side_path).map_err(io_err(&side_path))?;
    serde_json::to_writer_pretty(side.as_file_mut(), sidecar)
        .map_err(|e| CliError::Compute(format!("{}: {e}", side_path.display())))?;
    side.as_file_mut().write_all(b"\n").map_err(io_err(&side_path))?;

    data.persist(path).map_err(|e| io_err(path)(e.error))?;
    if let Err(e) = side.persist(&side_path) {
        let _ = std::fs::remove_file(path);
        return Err(io_err(&side_path)(e.error));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_name_appends_json() {
        assert_eq!(sidecar_path(Path::new("a/b.csv")), PathBuf::from("a/b.csv.json"));
        assert_eq!(sidecar_path(Path::new("paths.bin")), PathBuf::from("paths.bin.json"));
    }

    #[test]
    fn failed_body_leaves_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("x.csv");
        let side = Sidecar::new("debye", Value::Null);
        let r = emit(&target, &mut Vec::new(), &side, |w| {
            w.write_all(b"y,f\n")?;
            Err(circfrac::Error::Domain("boom".into()))
        });
        assert!(matches!(r, Err(CliError::Compute(_))));
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
    }

    #[test]
    fn stdout_gets_body_only() {
        let mut out = Vec::new();
        let side = Sidecar::new("debye", Value::Null);
        emit(Path::new("-"), &mut out, &side, |w| Ok(w.write_all(b"y,f\n")?)).unwrap();
        assert_eq!(out, b"y,f\n");
    }
}
