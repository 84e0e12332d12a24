use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;
use tempfile::NamedTempFile;

use crate::error::CliResult;

pub const RESULTS_CSV: &str = "results.csv";
pub const SUMMARY_JSON: &str = "summary.json";
pub const PLOT_SVG: &str = "plot.svg";

/// Everything a run produces, held in memory until the run has succeeded.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub csv: Vec<u8>,
    pub summary: Value,
    pub svg: Option<String>,
}

impl Artifacts {
    pub fn summary_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.summary).expect("summary serializes");
        s.push('\n');
        s
    }

    /// Writes each file through a temporary in `dir` and a rename.
    pub fn write_to(&self, dir: &Path) -> CliResult<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = vec![write_atomic(dir, RESULTS_CSV, &self.csv)?, write_atomic(dir, SUMMARY_JSON, self.summary_text().as_bytes())?];
        if let Some(svg) = &self.svg {
            written.push(write_atomic(dir, PLOT_SVG, svg.as_bytes())?);
        }
        Ok(written)
    }
}

fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> CliResult<PathBuf> {
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    let path = dir.join(name);
    tmp.persist(&path).map_err(|e| e.error)?;
    Ok(path)
}

/// A CSV writer over a byte buffer with LF terminators.
pub(crate) fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

pub(crate) fn finish(w: csv::Writer<Vec<u8>>) -> Vec<u8> {
    w.into_inner().expect("in-memory csv flush")
}
