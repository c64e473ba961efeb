//! CSV emission: comma-separated, `.` decimals, one header row, and
//! `#`-prefixed metadata comment lines carrying the config echo and seed
//! so every dataset is a self-describing reproducibility record.
//!
//! Floats are printed with Rust's shortest round-trip formatting, so output
//! is byte-identical across runs and platforms for identical inputs; no
//! timestamps are embedded for the same reason.

use std::io::{self, Write};

pub fn write_metadata<W: Write>(out: &mut W, lines: &[String]) -> io::Result<()> {
    writeln!(out, "# cogrelay v{}", env!("CARGO_PKG_VERSION"))?;
    for line in lines {
        writeln!(out, "# {line}")?;
    }
    Ok(())
}

pub fn write_row<W: Write>(out: &mut W, fields: &[String]) -> io::Result<()> {
    writeln!(out, "{}", fields.join(","))
}

/// Format a float for a CSV cell (shortest round-trip representation).
pub fn cell(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v}")
    }
}
