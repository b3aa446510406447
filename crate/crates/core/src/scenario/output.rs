//! Deterministic series output: CSV with '#'-prefixed header lines and
//! an optional JSON mirror, written atomically (temp file + rename).
//!
//! Floats are printed with Rust's shortest-roundtrip exponential
//! formatting, so the data section is byte-identical for identical
//! inputs; wall-clock metadata stays in the comment header.

use std::fmt;
use std::io::Write;
use std::path::Path;

use super::ScenarioError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) => write!(f, "{v:e}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// The byte-exact data section: column header plus rows.
    pub fn data_section(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), ScenarioError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| ScenarioError::io(format!("cannot create temp file in {}: {e}", dir.display())))?;
    tmp.write_all(bytes)
        .map_err(|e| ScenarioError::io(format!("write failed: {e}")))?;
    tmp.persist(path)
        .map_err(|e| ScenarioError::io(format!("cannot rename into {}: {e}", path.display())))?;
    Ok(())
}

/// Write the CSV file: `header_lines` become '#'-prefixed comments, the
/// data section follows.
pub fn write_csv(path: &Path, header_lines: &[String], table: &Table) -> Result<(), ScenarioError> {
    let mut text = String::new();
    for line in header_lines {
        text.push_str("# ");
        text.push_str(line);
        text.push('\n');
    }
    text.push_str(&table.data_section());
    atomic_write(path, text.as_bytes())
}

/// JSON mirror of the same table.
pub fn write_json(path: &Path, header: &serde_json::Value, table: &Table) -> Result<(), ScenarioError> {
    let rows: Vec<Vec<serde_json::Value>> = table
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| match c {
                    Cell::Int(v) => serde_json::json!(v),
                    Cell::Float(v) => serde_json::json!(v),
                })
                .collect()
        })
        .collect();
    let doc = serde_json::json!({
        "header": header,
        "columns": table.columns,
        "rows": rows,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("table serializes");
    text.push('\n');
    atomic_write(path, text.as_bytes())
}

/// Parse one of our CSV files back: returns (columns, string cells).
pub fn read_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>), ScenarioError> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| ScenarioError::config("series file has no column header"))?;
    let columns: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let mut rows = Vec::new();
    for line in lines {
        let cells: Vec<String> = line.split(',').map(|s| s.trim().to_string()).collect();
        if cells.len() != columns.len() {
            return Err(ScenarioError::config(format!(
                "row has {} cells, header has {} columns",
                cells.len(),
                columns.len()
            )));
        }
        rows.push(cells);
    }
    Ok((columns, rows))
}
