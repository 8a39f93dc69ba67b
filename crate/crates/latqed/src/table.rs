//! Deterministic CSV emission.
//!
//! Every table carries a header row and a fixed column order. Floating-point
//! cells are printed in scientific notation with 17 significant digits, which
//! round-trips any `f64` exactly; integers print as plain decimals. The
//! formatting never consults the locale, so a file's bytes depend only on the
//! numbers in it. Text cells are restricted to characters that need no
//! quoting, keeping the format trivially parseable.

use std::fmt::Write as _;

use crate::error::AppError;

/// Formats a float with 17 significant digits, locale-independent.
pub fn float_cell(value: f64) -> String {
    format!("{value:.16e}")
}

/// Formats an unsigned integer cell.
pub fn int_cell(value: usize) -> String {
    value.to_string()
}

/// Formats a boolean as `1` or `0`.
pub fn flag_cell(value: bool) -> String {
    String::from(if value { "1" } else { "0" })
}

/// An in-memory CSV table with a fixed schema.
#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    /// Creates an empty table with the given column names.
    pub fn new(columns: &[&str]) -> Table {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row. The arity must match the header and no cell may
    /// contain a comma, quote, or line break.
    pub fn push_row(&mut self, cells: Vec<String>) -> Result<(), AppError> {
        if cells.len() != self.columns.len() {
            return Err(AppError::Numeric(format!(
                "internal table error: row of {} cells against {} columns",
                cells.len(),
                self.columns.len()
            )));
        }
        for cell in &cells {
            if cell.contains(',') || cell.contains('"') || cell.contains('\n') {
                return Err(AppError::Numeric(format!(
                    "internal table error: cell `{cell}` needs quoting"
                )));
            }
        }
        self.rows.push(cells);
        Ok(())
    }

    /// Number of data rows.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// True when no data rows have been added.
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Renders the table: header line, then one line per row, `\n` endings.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}
