//! Fixed-schema tables for scan and report output.
//!
//! Scan columns: `n,T,method,terms_evaluated`.
//! Report columns: `n,T,M,f_half_nsq,abs_err_M,abs_err_f,normalized_err`.
//!
//! A header row is always written and lines end in LF. Integers are written
//! verbatim; reals use 17 significant digits in scientific notation, which
//! parses back to the identical `f64`.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use crate::asymptotic::ErrorRow;
use crate::counter::CountResult;
use crate::error::{Error, Result};

pub const SCAN_HEADER: [&str; 4] = ["n", "T", "method", "terms_evaluated"];
pub const REPORT_HEADER: [&str; 7] = ["n", "T", "M", "f_half_nsq", "abs_err_M", "abs_err_f", "normalized_err"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Tsv,
    /// Aligned columns for terminals. Not meant to be parsed back.
    Human,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "tsv" => Ok(Format::Tsv),
            "human" => Ok(Format::Human),
            other => Err(Error::Format(format!("unknown format {other:?}"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Tsv => "tsv",
            Format::Human => "human",
        })
    }
}

/// 17 significant digits.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn format_err(e: impl fmt::Display) -> Error {
    Error::Format(e.to_string())
}

fn scan_fields(row: &CountResult) -> Vec<String> {
    vec![row.n.to_string(), row.t.to_string(), row.method.to_string(), row.terms_evaluated.to_string()]
}

fn report_fields(row: &ErrorRow) -> Vec<String> {
    let mut fields = vec![row.n.to_string(), row.t.to_string()];
    fields.extend(
        [row.m, row.f_half_nsq, row.abs_err_m, row.abs_err_f, row.normalized_err].into_iter().map(format_real),
    );
    fields
}

fn write_table<W: Write>(out: W, format: Format, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    let delimiter = match format {
        Format::Csv => b',',
        Format::Tsv => b'\t',
        Format::Human => return write_human(out, header, rows),
    };
    let mut writer =
        csv::WriterBuilder::new().delimiter(delimiter).terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    writer.write_record(header).map_err(format_err)?;
    for row in rows {
        writer.write_record(&row).map_err(format_err)?;
    }
    writer.flush().map_err(format_err)
}

fn write_human<W: Write>(mut out: W, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, field) in widths.iter_mut().zip(row) {
            *w = (*w).max(field.len());
        }
    }
    let line = |fields: &mut dyn Iterator<Item = &str>| -> String {
        fields.zip(&widths).map(|(f, &w)| format!("{f:>w$}")).collect::<Vec<_>>().join("  ")
    };
    writeln!(out, "{}", line(&mut header.iter().copied())).map_err(format_err)?;
    for row in &rows {
        writeln!(out, "{}", line(&mut row.iter().map(String::as_str))).map_err(format_err)?;
    }
    Ok(())
}

pub fn write_scan<W: Write>(out: W, format: Format, rows: &[CountResult]) -> Result<()> {
    write_table(out, format, &SCAN_HEADER, rows.iter().map(scan_fields).collect())
}

pub fn write_report<W: Write>(out: W, format: Format, rows: &[ErrorRow]) -> Result<()> {
    write_table(out, format, &REPORT_HEADER, rows.iter().map(report_fields).collect())
}

fn read_records<R: Read>(input: R, format: Format, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let delimiter = match format {
        Format::Csv => b',',
        Format::Tsv => b'\t',
        Format::Human => return Err(Error::Format("human tables cannot be parsed".into())),
    };
    let mut reader = csv::ReaderBuilder::new().delimiter(delimiter).from_reader(input);
    let found = reader.headers().map_err(format_err)?;
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::Format(format!("unexpected header {found:?}")));
    }
    reader.records().map(|r| r.map_err(format_err)).collect()
}

fn field<T: FromStr>(record: &csv::StringRecord, index: usize, name: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    let raw = record.get(index).ok_or_else(|| Error::Format(format!("missing column {name}")))?;
    raw.parse().map_err(|e| Error::Format(format!("column {name}: {raw:?}: {e}")))
}

pub fn read_scan<R: Read>(input: R, format: Format) -> Result<Vec<CountResult>> {
    read_records(input, format, &SCAN_HEADER)?
        .iter()
        .map(|r| {
            Ok(CountResult {
                n: field(r, 0, "n")?,
                t: field(r, 1, "T")?,
                method: field(r, 2, "method")?,
                terms_evaluated: field(r, 3, "terms_evaluated")?,
            })
        })
        .collect()
}

/// Parses a report; derived columns are taken as written, not recomputed.
pub fn read_report<R: Read>(input: R, format: Format) -> Result<Vec<ErrorRow>> {
    read_records(input, format, &REPORT_HEADER)?
        .iter()
        .map(|r| {
            Ok(ErrorRow {
                n: field(r, 0, "n")?,
                t: field(r, 1, "T")?,
                m: field(r, 2, "M")?,
                f_half_nsq: field(r, 3, "f_half_nsq")?,
                abs_err_m: field(r, 4, "abs_err_M")?,
                abs_err_f: field(r, 5, "abs_err_f")?,
                normalized_err: field(r, 6, "normalized_err")?,
            })
        })
        .collect()
}
