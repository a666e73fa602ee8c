//! Output plumbing: format selection, file-or-stdout emission, CSV number
//! formatting.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Write `content` to the file at `out`, or to stdout when absent.
pub fn emit(out: Option<&Path>, content: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, content),
        None => io::stdout().write_all(content.as_bytes()),
    }
}

/// Fixed-decimal rendering for CSV cells.
pub fn csv_num(x: f64, decimals: usize) -> String {
    format!("{x:.decimals$}")
}

/// CSV cell for an optional value; inapplicable entries stay empty.
pub fn csv_opt(x: Option<f64>, decimals: usize) -> String {
    x.map(|v| csv_num(v, decimals)).unwrap_or_default()
}
