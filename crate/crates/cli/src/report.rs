use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_TRUNCATION: u32 = 8;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_PRECISION: u32 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

/// A command's output: free text lines for the text format and one table for
/// csv. Both carry the same header.
pub struct Report {
    command: &'static str,
    params: Vec<(String, String)>,
    lines: Vec<String>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            params: Vec::new(),
            lines: Vec::new(),
            columns: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn columns(&mut self, cols: &[&'static str]) {
        self.columns = cols.to_vec();
    }

    pub fn row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn header(&self) -> String {
        let mut h = format!(
            "# zpdehn {} report v{SCHEMA_VERSION} command={}\n# defaults truncation={DEFAULT_TRUNCATION} tol={DEFAULT_TOL:e} precision={DEFAULT_PRECISION}\n",
            env!("CARGO_PKG_VERSION"),
            self.command
        );
        if !self.params.is_empty() {
            let p: Vec<String> = self
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            let _ = writeln!(h, "# params {}", p.join(" "));
        }
        h
    }

    pub fn render(&self, format: Format) -> Result<String> {
        let mut out = self.header();
        match format {
            Format::Text => {
                for l in &self.lines {
                    out.push_str(l);
                    out.push('\n');
                }
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                out.push_str(&String::from_utf8(w.into_inner()?)?);
            }
        }
        Ok(out)
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<()> {
        let text = self.render(format)?;
        match out {
            Some(p) => {
                std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?
            }
            None => std::io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}
