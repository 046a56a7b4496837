//! The fixed CSV dialect all tables use: `.` decimal point, comma separator,
//! one header row, `#`-prefixed metadata lines, floats serialized with 17
//! significant digits so every emitted number re-parses to the same f64.

use crate::error::{CliError, Result};

/// Serialize a float with 17 significant digits (round-trip exact).
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Incremental CSV writer for one table.
#[derive(Debug, Default)]
pub struct CsvWriter {
    out: String,
    columns: usize,
}

impl CsvWriter {
    pub fn new() -> Self {
        CsvWriter::default()
    }

    /// Add a `# `-prefixed metadata line (newlines split into several).
    pub fn comment(&mut self, text: &str) {
        for line in text.lines() {
            self.out.push_str("# ");
            self.out.push_str(line);
            self.out.push('\n');
        }
    }

    pub fn header(&mut self, names: &[&str]) {
        self.columns = names.len();
        self.out.push_str(&names.join(","));
        self.out.push('\n');
    }

    /// Write one data row; cells must already be rendered.
    pub fn row(&mut self, cells: &[String]) {
        debug_assert_eq!(cells.len(), self.columns, "ragged CSV row");
        self.out.push_str(&cells.join(","));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

/// A parsed CSV table: metadata comments, header, raw string cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvTable {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    /// Cell parsed as f64.
    pub fn number(&self, row: usize, col: usize) -> Result<f64> {
        let cell = self
            .rows
            .get(row)
            .and_then(|r| r.get(col))
            .ok_or_else(|| CliError::input(format!("no cell at row {row}, column {col}")))?;
        cell.parse::<f64>()
            .map_err(|_| CliError::input(format!("cell ({row}, {col}) `{cell}` is not a number")))
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::input(format!("no column named `{name}`")))
    }
}

/// Parse the fixed CSV dialect. Empty input and ragged rows are rejected;
/// cell content is not interpreted.
pub fn parse_csv(text: &str) -> Result<CsvTable> {
    let mut comments = Vec::new();
    let mut header: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for (li, line) in text.lines().enumerate() {
        if let Some(stripped) = line.strip_prefix('#') {
            comments.push(stripped.trim_start().to_string());
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<String> = line.split(',').map(|c| c.to_string()).collect();
        match &header {
            None => header = Some(cells),
            Some(h) => {
                if cells.len() != h.len() {
                    return Err(CliError::input(format!(
                        "line {}: row has {} cells, header has {}",
                        li + 1,
                        cells.len(),
                        h.len()
                    )));
                }
                rows.push(cells);
            }
        }
    }
    let header = header.ok_or_else(|| CliError::input("CSV has no header row"))?;
    Ok(CsvTable {
        comments,
        header,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        for v in [
            0.1073741824,
            0.8,
            1.0 / 3.0,
            2.0345e-5,
            f64::MIN_POSITIVE,
            0.0,
            123456.789,
        ] {
            let s = fmt_float(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v} -> {s} -> {back}");
        }
        assert!(fmt_float(f64::NAN).parse::<f64>().unwrap().is_nan());
    }

    #[test]
    fn writer_and_parser_agree() {
        let mut w = CsvWriter::new();
        w.comment("config: n=20 seed=42");
        w.header(&["t", "value"]);
        w.row(&["25".into(), fmt_float(0.10737)]);
        let text = w.finish();
        let table = parse_csv(&text).unwrap();
        assert_eq!(table.comments, vec!["config: n=20 seed=42"]);
        assert_eq!(table.header, vec!["t", "value"]);
        assert_eq!(table.number(0, 0).unwrap(), 25.0);
        assert_eq!(table.number(0, 1).unwrap(), 0.10737);
        assert_eq!(table.column_index("value").unwrap(), 1);
        assert!(table.column_index("nope").is_err());
    }

    #[test]
    fn parser_rejects_bad_shapes() {
        assert!(parse_csv("").is_err());
        assert!(parse_csv("# only a comment\n").is_err());
        assert!(parse_csv("a,b\n1,2,3\n").is_err());
        assert!(parse_csv("a,b\n1\n").is_err());
    }
}
