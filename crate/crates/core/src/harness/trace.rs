use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One CSV row: the state of block column `i` after an outer iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub outer_iter: usize,
    /// Cumulative inner steps (Richardson applications or direct solves).
    pub inner_step: usize,
    /// Block column, 1-based.
    pub i: usize,
    pub ritz_value: f64,
    pub abs_err: Option<f64>,
    pub component_ratio: Option<f64>,
    pub tau: f64,
    pub residual: f64,
}

pub const TRACE_HEADER: &str = "outer_iter,inner_step,i,ritz_value,abs_err,component_ratio,tau,residual";

fn csv_error(e: csv::Error) -> Error {
    Error::Parse {
        path: "<csv>".into(),
        line: e.position().map_or(0, |p| p.line() as usize),
        msg: e.to_string(),
    }
}

/// Serializes rows with a header, LF endings, and shortest round-trip floats.
pub fn to_csv_string<T: Serialize>(rows: &[T], header: &str) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    let body = w.into_inner().map_err(|e| Error::io("<csv>", e.into_error()))?;
    let mut out = String::with_capacity(header.len() + 1 + body.len());
    out.push_str(header);
    out.push('\n');
    out.push_str(std::str::from_utf8(&body).expect("csv output is utf-8"));
    Ok(out)
}

pub fn parse_csv<T: for<'de> Deserialize<'de>>(text: &str) -> Result<Vec<T>> {
    csv::ReaderBuilder::new()
        .from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(csv_error))
        .collect()
}

pub fn trace_to_csv(records: &[TraceRecord]) -> Result<String> {
    to_csv_string(records, TRACE_HEADER)
}

pub fn parse_trace_csv(text: &str) -> Result<Vec<TraceRecord>> {
    parse_csv(text)
}

/// Writes `contents` next to `path` under a temporary name and renames it into
/// place, so a failed write never leaves a partial file at `path`.
pub fn write_atomically(path: &Path, contents: &str) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::io(path, std::io::Error::other("not a file path")))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    if let Err(e) = fs::write(&tmp, contents) {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path, e));
    }
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}
