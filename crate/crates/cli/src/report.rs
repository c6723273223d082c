//! Deterministic CSV/JSON emission.
//!
//! The same config and seed must produce byte-identical files, so rows are
//! written in construction order with plain `Display` float formatting and
//! no timestamps.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;

use smoothlearn::funcrep::Smoothness;

use crate::experiments::SummaryRow;

pub const CSV_HEADER: &str = "experiment,p,q,d,m,seed,measured_loss,floor,ceiling";

pub fn csv_line(row: &SummaryRow) -> String {
    let q = match row.q {
        Smoothness::Finite(q) => format!("{q}"),
        Smoothness::Infinite => "inf".into(),
    };
    let m = row.m.map_or(String::new(), |m| m.to_string());
    let floor = row.floor.map_or(String::new(), |v| format!("{v}"));
    let ceiling = row.ceiling.map_or(String::new(), |v| format!("{v}"));
    format!(
        "{},{},{},{},{},{},{},{},{}",
        row.experiment, row.p, q, row.d, m, row.seed, row.measured_loss, floor, ceiling
    )
}

pub fn render_csv(rows: &[SummaryRow]) -> String {
    let mut text = String::from(CSV_HEADER);
    text.push('\n');
    for row in rows {
        text.push_str(&csv_line(row));
        text.push('\n');
    }
    text
}

/// Writes the summary CSV plus any transcript/witness JSON files, returning
/// the paths written. Rows must be nonempty.
pub fn emit_report(
    experiment: &str,
    rows: &[SummaryRow],
    transcripts: &[(String, Value)],
    out_dir: &Path,
) -> std::io::Result<Vec<PathBuf>> {
    if rows.is_empty() {
        return Err(std::io::Error::new(
            std::io::ErrorKind::InvalidInput,
            "no rows to report (empty parameter grid)",
        ));
    }
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();

    let csv_path = out_dir.join(format!("{experiment}.csv"));
    let mut file = fs::File::create(&csv_path)?;
    file.write_all(render_csv(rows).as_bytes())?;
    written.push(csv_path);

    for (stem, payload) in transcripts {
        let path = out_dir.join(format!("{stem}.json"));
        let mut file = fs::File::create(&path)?;
        serde_json::to_writer_pretty(&mut file, payload)?;
        file.write_all(b"\n")?;
        written.push(path);
    }
    Ok(written)
}
