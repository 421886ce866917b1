//! One CSV row per multi-start solve.

use std::fs::OpenOptions;
use std::path::Path;

use serde::{Deserialize, Serialize};

/// Column order is the CSV schema; new columns go at the end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub selector: String,
    pub eig: String,
    pub direction: String,
    pub starts: usize,
    /// Full precision, `{:.16e}`.
    pub best_lambda: String,
    pub accuracy: Option<f64>,
    pub median_iters: usize,
    pub wall_time_s: f64,
    pub seed: u64,
}

pub fn format_lambda(l: f64) -> String {
    format!("{l:.16e}")
}

/// Appends `records` to `path`, writing the header only when the file is new or empty.
pub fn append_csv(path: &Path, records: &[RunRecord]) -> std::io::Result<()> {
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()
}
