//! CSV artifacts with `#`-prefixed metadata headers.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// One CSV file: metadata lines, a column header and numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file_name: String,
    pub metadata: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            // `Display` for f64 is the shortest representation that round-trips.
            Cell::Num(v) => write!(f, "{v}"),
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Empty => Ok(()),
        }
    }
}

impl Artifact {
    pub fn new(file_name: impl Into<String>, columns: &[&str]) -> Self {
        Self { file_name: file_name.into(), metadata: Vec::new(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.metadata {
            if line.is_empty() {
                out.push_str("#\n");
            } else {
                let _ = writeln!(out, "# {line}");
            }
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::to_string).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn write_to(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join(&self.file_name);
        std::fs::write(&path, self.render()).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Ok(path)
    }
}
