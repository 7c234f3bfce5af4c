//! Tabular and report output.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::Format;
use crate::error::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "TODA_LIFT_OUT_DIR";

/// Named columns of numbers, one row per sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// `name_1, …, name_n`.
pub fn indexed(name: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (1..=n).map(move |i| format!("{name}_{i}"))
}

/// Output path: explicit, else `$TODA_LIFT_OUT_DIR/<stem>.<ext>`, else `./<stem>.<ext>`.
pub fn resolve_path(explicit: Option<&Path>, stem: &str, format: Format) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    let dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
    dir.join(format!("{stem}.{}", format.extension()))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    Ok(BufWriter::new(File::create(path).map_err(io)?))
}

/// Writes a table as CSV with 17 significant digits, or as JSON.
pub fn write_table(table: &Table, format: Format, path: &Path) -> Result<(), CliError> {
    let mut out = create(path)?;
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&table.columns).map_err(|e| CliError::Csv(path.to_path_buf(), e))?;
            for row in &table.rows {
                w.write_record(row.iter().map(|v| format!("{v:.16e}")))
                    .map_err(|e| CliError::Csv(path.to_path_buf(), e))?;
            }
            w.flush().map_err(io)?;
        }
        Format::Json => serde_json::to_writer_pretty(&mut out, table).map_err(|e| CliError::Json(path.to_path_buf(), e))?,
    }
    out.flush().map_err(io)
}

/// Reads a table written by [`write_table`] in CSV form.
pub fn read_csv(path: &Path) -> Result<Table, CliError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::Csv(path.to_path_buf(), e))?;
    let columns = r
        .headers()
        .map_err(|e| CliError::Csv(path.to_path_buf(), e))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut table = Table::new(columns);
    for rec in r.records() {
        let rec = rec.map_err(|e| CliError::Csv(path.to_path_buf(), e))?;
        let row = rec
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Parse(path.to_path_buf(), e.to_string()))?;
        table.rows.push(row);
    }
    Ok(table)
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), CliError> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::Json(path.to_path_buf(), e))?;
    out.flush().map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
