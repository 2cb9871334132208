//! Output helpers: JSON with an embedded `config`, CSV with a config header line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::commands::CliError;

pub fn prepare_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Output(dir.to_path_buf(), e))
}

#[derive(Serialize)]
struct WithConfig<'a, T: Serialize> {
    config: &'a serde_json::Value,
    #[serde(flatten)]
    body: &'a T,
}

pub fn write_json<T: Serialize>(
    dir: &Path,
    name: &str,
    config: &serde_json::Value,
    body: &T,
) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(&WithConfig { config, body })
        .map_err(|e| CliError::Serialize(e.to_string()))?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| CliError::Output(path.clone(), e))?;
    Ok(path)
}

/// Writes `# config: {...}`, a header row and the data rows.
pub fn write_csv(
    dir: &Path,
    name: &str,
    config: &serde_json::Value,
    header: &[String],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let err = |e: std::io::Error| CliError::Output(path.clone(), e);
    let mut file = fs::File::create(&path).map_err(err)?;
    writeln!(file, "# config: {config}").map_err(err)?;
    let mut w = csv::Writer::from_writer(file);
    let csv_err = |e: csv::Error| CliError::Serialize(e.to_string());
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(err)?;
    Ok(path)
}

pub fn num(x: f64) -> String {
    format!("{x:e}")
}
