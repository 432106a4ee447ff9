//! Delimiter-separated output tables.

use std::fs::File;
use std::path::Path;

use crate::CliError;

/// A header row and string cells, written as CSV.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<I, S>(header: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push<I, S>(&mut self, row: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let row: Vec<String> = row.into_iter().map(Into::into).collect();
        debug_assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    /// Parses a file written by [`emit_table`].
    pub fn read(path: &Path) -> Result<Self, csv::Error> {
        let mut reader = csv::Reader::from_path(path)?;
        let header = reader.headers()?.iter().map(String::from).collect();
        let rows =
            reader.records().map(|r| r.map(|rec| rec.iter().map(String::from).collect())).collect::<Result<_, _>>()?;
        Ok(Self { header, rows })
    }
}

/// Writes `table` as CSV with one header row. An empty table gives a
/// header-only file.
pub fn emit_table(table: &Table, path: &Path) -> Result<(), CliError> {
    let fail = |e: &dyn std::fmt::Display| CliError::Output { path: path.to_path_buf(), message: e.to_string() };
    let file = File::create(path).map_err(|e| fail(&e))?;
    let mut writer = csv::Writer::from_writer(file);
    writer.write_record(&table.header).map_err(|e| fail(&e))?;
    for row in &table.rows {
        writer.write_record(row).map_err(|e| fail(&e))?;
    }
    writer.flush().map_err(|e| fail(&e))
}

/// Shortest round-tripping form; scientific notation outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, 0.8, 8.0 / 9.0, 1e-300, -2.5e-7, 3e20, 12.5, f64::NAN] {
            let text = num(x);
            let back: f64 = text.parse().unwrap();
            assert!(back == x || (x.is_nan() && back.is_nan()), "{text}");
        }
        assert_eq!(num(1e-300), "1e-300");
        assert_eq!(num(0.25), "0.25");
    }

    #[test]
    fn header_only_when_empty() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        emit_table(&Table::new(["a", "b"]), &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "a,b\n");
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let mut t = Table::new(["label", "value", "note"]);
        t.push(["a", "0.8", "has,comma"]);
        t.push(["b", "1e-300", "quote \" inside"]);
        emit_table(&t, &path).unwrap();
        assert_eq!(Table::read(&path).unwrap(), t);
    }

    #[test]
    fn unwritable_destination() {
        let dir = tempfile::tempdir().unwrap();
        let err = emit_table(&Table::new(["a"]), &dir.path().join("missing/t.csv")).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }
}
