//! CSV tables headed by a `#` line carrying the run configuration.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

/// Settings of one command invocation, recorded with every table it writes.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub inputs: Vec<PathBuf>,
    pub output: Option<PathBuf>,
    pub shape: Option<(u64, u64)>,
    pub m: Vec<usize>,
    pub digits: Vec<u32>,
    pub beta0: Option<f64>,
    pub beta1: Option<String>,
    pub beta2: Option<String>,
    pub beta3: Option<f64>,
    pub delta: Option<f64>,
    pub eps: Option<f64>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub l: Option<u64>,
    pub p: Option<f64>,
    pub threads: Option<usize>,
}

/// Header row plus string cells.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// CSV text with the configuration as a leading `#` comment.
    pub fn to_csv(&self, config: &RunConfig) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells");
        let cfg = serde_json::to_string(config).expect("config serialization is infallible");
        format!("# intrecover {cfg}\n{body}")
    }

    pub fn write_csv(&self, path: &Path, config: &RunConfig) -> Result<(), CliError> {
        fs::write(path, self.to_csv(config)).map_err(|e| CliError::io(path, e))
    }

    /// Aligned plain-text rendering for terminals.
    pub fn to_text(&self) -> String {
        let widths: Vec<usize> = (0..self.header.len())
            .map(|i| {
                self.rows
                    .iter()
                    .map(|r| r[i].len())
                    .chain([self.header[i].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| {
            let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.header);
        for r in &self.rows {
            out += &line(r);
        }
        out
    }
}
