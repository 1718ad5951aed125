//! Result files: CSV tables, two-column plot data and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::error::CliError;

/// Decimal rendering with 6 significant digits and trailing zeros removed.
/// Non-finite values print as `nan`, `inf` or `-inf`.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.5e}");
    let exp: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .unwrap_or(0);
    let decimals = (5 - exp).max(0) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.truncate(s.trim_end_matches('0').trim_end_matches('.').len());
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// Files written by one command, all inside one output directory.
pub struct Artifacts {
    dir: PathBuf,
    files: Vec<String>,
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

impl Artifacts {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(io_error(dir))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(io_error(&path))?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn csv(
        &mut self,
        name: &str,
        header: &[&str],
        rows: &[Vec<String>],
    ) -> Result<(), CliError> {
        let path = self.dir.join(name);
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let to_io = |e: csv::Error| CliError::Io {
            path: path.clone(),
            source: e.into(),
        };
        w.write_record(header).map_err(to_io)?;
        for row in rows {
            w.write_record(row).map_err(to_io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io {
            path: path.clone(),
            source: e.into_error(),
        })?;
        self.write(name, &bytes)
    }

    /// Whitespace-separated `x y` pairs after `#` comment lines.
    pub fn dat(
        &mut self,
        name: &str,
        comments: &[String],
        points: &[(f64, f64)],
    ) -> Result<(), CliError> {
        let mut text = String::new();
        for c in comments {
            text.push_str(&format!("# {c}\n"));
        }
        for (x, y) in points {
            text.push_str(&format!("{} {}\n", format_number(*x), format_number(*y)));
        }
        self.write(name, text.as_bytes())
    }

    /// Writes `manifest_<command>.json` listing every file of this run.
    pub fn finish(
        mut self,
        command: &str,
        config: &RunConfig,
        seeds: Value,
        deterministic: bool,
    ) -> Result<Vec<String>, CliError> {
        let settings: Map<String, Value> = config
            .entries()
            .into_iter()
            .map(|(k, v)| (k, Value::String(v)))
            .collect();
        let manifest = json!({
            "command": command,
            "tool": "gsa",
            "version": env!("CARGO_PKG_VERSION"),
            "config": settings,
            "seeds": seeds,
            "deterministic": deterministic,
            "files": self.files,
        });
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest is valid JSON");
        text.push('\n');
        let name = format!("manifest_{command}.json");
        self.write(&name, text.as_bytes())?;
        Ok(self.files)
    }
}

#[cfg(test)]
mod tests {
    use super::format_number;

    #[test]
    fn six_significant_digits() {
        assert_eq!(format_number(0.9203), "0.9203");
        assert_eq!(format_number(246.123456789), "246.123");
        assert_eq!(format_number(-0.000123456789), "-0.000123457");
        assert_eq!(format_number(2_000_000.0), "2000000");
        assert_eq!(format_number(9.9999996), "10");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(-1e-30), "-0.000000000000000000000000000001");
        assert_eq!(format_number(f64::NAN), "nan");
    }
}
