//! Table emission: RFC-4180 CSV, JSON lines, and bare two-column
//! plot data. One row per cell, deterministic field order.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

pub struct Sink {
    out: Box<dyn Write>,
}

impl Sink {
    pub fn open(path: &Option<PathBuf>) -> Result<Self> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(
                std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
            ),
            None => Box::new(std::io::stdout()),
        };
        Ok(Sink { out })
    }

    pub fn write_rows<T: Serialize>(&mut self, format: Format, rows: &[T]) -> Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut self.out);
                for row in rows {
                    w.serialize(row)?;
                }
                w.flush()?;
            }
            Format::Jsonl => {
                for row in rows {
                    serde_json::to_writer(&mut self.out, row)?;
                    writeln!(self.out)?;
                }
            }
        }
        Ok(())
    }

    /// Two-column output for external plotting.
    pub fn write_pairs(&mut self, pairs: &[(f64, f64)]) -> Result<()> {
        for (x, y) in pairs {
            writeln!(self.out, "{x} {y}")?;
        }
        Ok(())
    }

    pub fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.out, "{s}")?;
        Ok(())
    }
}
