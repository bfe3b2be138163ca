//! Deterministic CSV/JSON emission with atomic file replacement.
//!
//! CSV files start with a `# hbar-sim <kind> v1` comment line followed by
//! a header row. Floats use shortest round-trip scientific notation at the
//! default precision of 17; lower precisions round to that many significant
//! digits. Lines end in LF.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

pub const CSV_SCHEMA_VERSION: u32 = 1;

/// Format one float for CSV.
pub fn format_float(v: f64, precision: usize) -> String {
    if precision >= 17 {
        format!("{v:e}")
    } else {
        format!("{v:.*e}", precision.saturating_sub(1))
    }
}

/// An in-memory CSV table.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub kind: String,
    /// Extra `# key=value` lines after the schema line.
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new(kind: &str, columns: &[&str]) -> Self {
        CsvTable {
            kind: kind.into(),
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.into(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn render(&self, precision: usize) -> String {
        let mut s = format!("# hbar-sim {} v{}\n", self.kind, CSV_SCHEMA_VERSION);
        for (k, v) in &self.meta {
            s.push_str(&format!("# {k}={v}\n"));
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_float(v, precision)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

/// Parse a rendered table back into its kind, columns and rows.
pub fn parse_csv(text: &str) -> Result<CsvTable> {
    let bad = |msg: &str| Error::ConfigSyntax(format!("csv: {msg}"));
    let mut lines = text.lines();
    let first = lines.next().ok_or_else(|| bad("empty"))?;
    let kind = first
        .strip_prefix("# hbar-sim ")
        .and_then(|r| r.strip_suffix(&format!(" v{CSV_SCHEMA_VERSION}")))
        .ok_or_else(|| bad("missing schema line"))?;
    let mut table = CsvTable::new(kind, &[]);
    let mut header = None;
    for line in lines {
        if header.is_none() {
            if let Some(m) = line.strip_prefix("# ") {
                let (k, v) = m.split_once('=').ok_or_else(|| bad("bad meta line"))?;
                table.meta.push((k.into(), v.into()));
                continue;
            }
            header = Some(line);
            table.columns = line.split(',').map(String::from).collect();
            continue;
        }
        let row = line
            .split(',')
            .map(|c| c.parse::<f64>().map_err(|_| bad("bad number")))
            .collect::<Result<Vec<_>>>()?;
        table.rows.push(row);
    }
    Ok(table)
}

/// Write `bytes` to `path` through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::io(path, std::io::Error::other("no file name")))?;
    let tmp: PathBuf = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path, e));
    }
    Ok(())
}

pub fn write_csv(dir: &Path, name: &str, table: &CsvTable, precision: usize) -> Result<PathBuf> {
    let path = dir.join(name);
    write_atomic(&path, table.render(precision).as_bytes())?;
    Ok(path)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    let path = dir.join(name);
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    write_atomic(&path, &bytes)?;
    Ok(path)
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}
