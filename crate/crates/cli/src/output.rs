use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::CliError;

/// Collects the files of one run and writes them atomically.
pub struct OutputDir {
    dir: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::generic(format!("cannot create {}: {e}", dir.display())))?;
        Ok(OutputDir {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn files(&self) -> &[String] {
        &self.written
    }

    /// Writes to a hidden temporary file in the same directory, then renames.
    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let target = self.dir.join(name);
        let tmp = self.dir.join(format!(".{name}.tmp"));
        let io = |e: std::io::Error| CliError::generic(format!("cannot write {}: {e}", target.display()));
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(contents.as_bytes()).map_err(io)?;
        f.sync_all().map_err(io)?;
        fs::rename(&tmp, &target).map_err(io)?;
        if !self.written.iter().any(|w| w == name) {
            self.written.push(name.to_string());
        }
        Ok(())
    }

    pub fn write_json(&mut self, name: &str, value: &Value) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::generic(e.to_string()))?;
        text.push('\n');
        self.write(name, &text)
    }
}

pub struct Manifest {
    pub subcommand: &'static str,
    pub config: Value,
    pub seed: Option<u64>,
    pub checks: Value,
    pub exit_code: i32,
}

impl Manifest {
    pub fn to_value(&self, files: &[String], wall_time: f64) -> Value {
        json!({
            "tool": "structenc",
            "version": env!("CARGO_PKG_VERSION"),
            "subcommand": self.subcommand,
            "config": self.config,
            "seed": self.seed,
            "outputs": files,
            "checks": self.checks,
            "exit_code": self.exit_code,
            "wall_time_seconds": wall_time,
        })
    }
}

/// `inf` as a string, finite values as numbers.
pub fn num(v: f64) -> Value {
    if v.is_infinite() {
        json!(if v > 0.0 { "inf" } else { "-inf" })
    } else {
        json!(v)
    }
}
