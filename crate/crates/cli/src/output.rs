use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    /// Aligned plain-text table.
    Text,
}

/// Rows of strings with a header, rendered as CSV or aligned text.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: Into<String>>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(Into::into).collect());
    }

    fn write_csv(&self, w: impl Write) -> Result<(), CliError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for r in &self.rows {
            out.write_record(r)?;
        }
        out.flush()?;
        Ok(())
    }

    fn write_text(&self, mut w: impl Write) -> io::Result<()> {
        let cols = self.header.len();
        let mut width = vec![0; cols];
        for r in std::iter::once(&self.header).chain(&self.rows) {
            for (i, c) in r.iter().enumerate().take(cols) {
                width[i] = width[i].max(c.chars().count());
            }
        }
        for r in std::iter::once(&self.header).chain(&self.rows) {
            let line: Vec<String> = r
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{c:<w$}", w = width[i.min(cols - 1)]))
                .collect();
            writeln!(w, "{}", line.join("  ").trim_end())?;
        }
        Ok(())
    }
}

/// Opens `--out` or standard output.
pub fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => Box::new(File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    })
}

/// Writes the table (csv/text) or the structured value (json).
pub fn emit<T: Serialize + ?Sized>(
    format: Format,
    out: Option<&Path>,
    table: &Table,
    json: &T,
    appendix: &[String],
) -> Result<(), CliError> {
    let mut w = sink(out)?;
    match format {
        Format::Csv => table.write_csv(&mut w)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, json)?;
            writeln!(w)?;
        }
        Format::Text => {
            table.write_text(&mut w)?;
            if !appendix.is_empty() {
                writeln!(w)?;
                for line in appendix {
                    writeln!(w, "{line}")?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Numbers in output: shortest round-trip form, `NA` for missing.
pub fn num(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => format!("{v}"),
        Some(v) => format!("{v}"),
        None => "NA".into(),
    }
}
