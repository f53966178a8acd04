//! Deterministic output helpers: CSV writing with fixed 9-decimal floats.

use std::path::Path;

use crate::CliError;

/// Fixed-width float formatting for every CSV cell.
pub fn f9(x: f64) -> String {
    format!("{x:.9}")
}

pub struct CsvOut {
    writer: csv::Writer<std::fs::File>,
    path: String,
}

impl CsvOut {
    pub fn create(path: &Path, header: &[&str]) -> Result<CsvOut, CliError> {
        let file = std::fs::File::create(path)
            .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))?;
        let writer = csv::Writer::from_writer(file);
        let mut out = CsvOut {
            path: path.display().to_string(),
            writer,
        };
        out.write(header.iter().map(|s| s.to_string()))?;
        Ok(out)
    }

    pub fn write<I: IntoIterator<Item = String>>(&mut self, row: I) -> Result<(), CliError> {
        self.writer
            .write_record(row.into_iter().map(|s| s.into_bytes()))
            .map_err(|e| CliError::runtime(format!("writing {}: {e}", self.path)))
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.writer
            .flush()
            .map_err(|e| CliError::runtime(format!("flushing {}: {e}", self.path)))
    }
}

/// Write raw lines (JSONL or free-form text blocks).
pub fn write_lines(path: &Path, lines: &[String]) -> Result<(), CliError> {
    let mut body = lines.join("\n");
    if !body.is_empty() {
        body.push('\n');
    }
    std::fs::write(path, body)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))
}
