//! CSV reports with a `#`-prefixed metadata header.

use sha2::{Digest, Sha256};

use super::config::ExperimentConfig;
use crate::error::{Error, Result};

/// Column names and stringified rows of one experiment.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::DimensionMismatch { expected: self.columns.len(), got: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Index of a column by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of a numeric column; blank cells are skipped.
    pub fn values(&self, name: &str) -> Result<Vec<f64>> {
        let k = self.column(name).ok_or_else(|| Error::InvalidArgument(format!("no column `{name}`")))?;
        self.rows
            .iter()
            .filter(|r| !r[k].is_empty())
            .map(|r| r[k].parse().map_err(|_| Error::InvalidArgument(format!("`{}` in column `{name}` is not a number", r[k]))))
            .collect()
    }
}

/// Shortest round-trip representation, so identical inputs give identical text.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Header block followed by the CSV body.
pub fn render(config: &ExperimentConfig, table: &Table) -> Result<String> {
    let resolved = config.to_toml();
    let mut out = String::new();
    out.push_str(&format!("# paritysim {}\n", env!("CARGO_PKG_VERSION")));
    out.push_str(&format!("# experiment: {}\n", config.experiment.name()));
    out.push_str(&format!("# seed: {}\n", config.run.seed));
    out.push_str(&format!("# config-sha256: {}\n", sha256_hex(resolved.as_bytes())));
    out.push_str("# config:\n");
    for line in resolved.lines() {
        if line.is_empty() {
            out.push_str("#\n");
        } else {
            out.push_str(&format!("#   {line}\n"));
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.columns).map_err(csv_error)?;
    for row in &table.rows {
        w.write_record(row).map_err(csv_error)?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    out.push_str(std::str::from_utf8(&body).expect("csv output is UTF-8"));
    Ok(out)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Splits a rendered report into its header lines and the parsed table.
pub fn parse(text: &str) -> Result<(Vec<String>, Table)> {
    let header: Vec<String> = text.lines().take_while(|l| l.starts_with('#')).map(str::to_string).collect();
    let body: String = text.lines().skip(header.len()).map(|l| format!("{l}\n")).collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let mut table = Table::new(r.headers().map_err(csv_error)?.iter());
    for rec in r.records() {
        table.push(rec.map_err(csv_error)?.iter().map(str::to_string).collect())?;
    }
    Ok((header, table))
}
