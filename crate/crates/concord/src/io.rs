//! CSV and JSON matrix documents.
//!
//! CSV: one row per line, comma separated, LF or CRLF line endings. An
//! optional first line `#labels: A, B, C` names the stimuli; other lines
//! starting with `#` are comments. JSON: `{"labels"?: [string], "matrix":
//! [[number | string]]}`. In both formats a value is either a decimal
//! number or a fraction `a/b` of positive integers, which is evaluated as
//! one correctly rounded division.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use concord_core::PcMatrix;

/// Significant digits used by [`emit_matrix`] unless overridden.
pub const DEFAULT_PRECISION: usize = 12;

/// Environment variable overriding [`DEFAULT_PRECISION`].
pub const PRECISION_ENV: &str = "CONCORD_PRECISION";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// Guesses the format of `text`: JSON if it starts with `{`, CSV otherwise.
    pub fn sniff(text: &str) -> Format {
        if text.trim_start_matches('\u{feff}').trim_start().starts_with('{') {
            Format::Json
        } else {
            Format::Csv
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}`, expected csv or json")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    /// `line` and `column` are one-based. For JSON documents they locate the
    /// syntax error, or for a bad value, its matrix row and column.
    #[error("parse error at line {line}, column {column}: {reason}")]
    Parse {
        line: usize,
        column: usize,
        reason: String,
    },
    #[error("matrix is not square: {rows} rows of {cols} entries")]
    NonSquare { rows: usize, cols: usize },
    #[error("entry ({row}, {col}) = {value} is not a positive finite number")]
    NonPositiveEntry { row: usize, col: usize, value: f64 },
}

impl IoError {
    fn parse(line: usize, column: usize, reason: impl Into<String>) -> Self {
        IoError::Parse {
            line,
            column,
            reason: reason.into(),
        }
    }
}

/// A parsed comparisons matrix with optional stimulus labels.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDocument {
    pub n: usize,
    pub entries: Vec<Vec<f64>>,
    pub source_format: Format,
    pub labels: Option<Vec<String>>,
}

impl MatrixDocument {
    pub fn new(entries: Vec<Vec<f64>>, labels: Option<Vec<String>>, source_format: Format) -> Self {
        MatrixDocument {
            n: entries.len(),
            entries,
            source_format,
            labels,
        }
    }

    pub fn from_matrix(m: &PcMatrix, labels: Option<Vec<String>>, source_format: Format) -> Self {
        Self::new(m.to_rows(), labels, source_format)
    }

    /// Labels, or `1 .. n` when the document has none.
    pub fn labels_or_indices(&self) -> Vec<String> {
        self.labels
            .clone()
            .unwrap_or_else(|| (1..=self.n).map(|i| i.to_string()).collect())
    }
}

/// Parses a decimal number or an `a/b` fraction.
pub fn parse_scalar(text: &str) -> Result<f64, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty value".into());
    }
    if let Some((num, den)) = s.split_once('/') {
        let parse_int = |part: &str| -> Result<u64, String> {
            let part = part.trim();
            if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(format!("`{s}` is not a fraction of positive integers"));
            }
            part.parse::<u64>().map_err(|e| format!("`{s}`: {e}"))
        };
        let (negative, num) = match num.trim().strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, num),
        };
        let (a, b) = (parse_int(num)?, parse_int(den)?);
        if b == 0 {
            return Err(format!("`{s}` has a zero denominator"));
        }
        if a > 1 << 53 || b > 1 << 53 {
            return Err(format!("`{s}` has a term too large to convert exactly"));
        }
        // both terms are exact in f64, so the division rounds once
        let v = a as f64 / b as f64;
        return Ok(if negative { -v } else { v });
    }
    s.parse::<f64>().map_err(|_| format!("`{s}` is not a number"))
}

fn check_positive(entries: &[Vec<f64>]) -> Result<(), IoError> {
    for (i, row) in entries.iter().enumerate() {
        for (j, &value) in row.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(IoError::NonPositiveEntry {
                    row: i + 1,
                    col: j + 1,
                    value,
                });
            }
        }
    }
    Ok(())
}

fn check_square(entries: &[Vec<f64>]) -> Result<(), IoError> {
    let rows = entries.len();
    let cols = entries.first().map_or(0, Vec::len);
    if rows == 0 || rows != cols {
        return Err(IoError::NonSquare { rows, cols });
    }
    Ok(())
}

fn parse_labels(spec: &str) -> Vec<String> {
    spec.split(',').map(|l| l.trim().to_string()).collect()
}

fn parse_csv(text: &str) -> Result<MatrixDocument, IoError> {
    let mut labels = None;
    let mut entries: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_start_matches('\u{feff}').trim_end_matches('\r').trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(spec) = rest.trim_start().strip_prefix("labels:") {
                if labels.is_some() || !entries.is_empty() {
                    return Err(IoError::parse(line_no, 1, "labels header must precede the matrix rows"));
                }
                labels = Some(parse_labels(spec));
            }
            continue;
        }
        let mut row = Vec::new();
        for (col, field) in line.split(',').enumerate() {
            row.push(parse_scalar(field).map_err(|reason| IoError::parse(line_no, col + 1, reason))?);
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(IoError::parse(
                    line_no,
                    row.len().min(w) + 1,
                    format!("row length mismatch: expected {w} values, found {}", row.len()),
                ))
            }
            Some(_) => {}
        }
        entries.push(row);
    }
    finish(entries, labels, Format::Csv)
}

#[derive(Deserialize)]
struct JsonDocument {
    #[serde(default)]
    labels: Option<Vec<String>>,
    matrix: Vec<Vec<Value>>,
}

fn parse_json(text: &str) -> Result<MatrixDocument, IoError> {
    let doc: JsonDocument = serde_json::from_str(text.trim_start_matches('\u{feff}'))
        .map_err(|e| IoError::parse(e.line(), e.column(), e.to_string()))?;
    let width = doc.matrix.first().map_or(0, Vec::len);
    let mut entries = Vec::with_capacity(doc.matrix.len());
    for (i, row) in doc.matrix.iter().enumerate() {
        if row.len() != width {
            return Err(IoError::parse(
                i + 1,
                row.len().min(width) + 1,
                format!(
                    "row length mismatch in matrix row {}: expected {width} values, found {}",
                    i + 1,
                    row.len()
                ),
            ));
        }
        let mut parsed = Vec::with_capacity(row.len());
        for (j, v) in row.iter().enumerate() {
            let value = match v {
                Value::Number(num) => num.as_f64().ok_or_else(|| format!("{num} is out of range")),
                Value::String(s) => parse_scalar(s),
                other => Err(format!("expected a number or fraction string, found {other}")),
            }
            .map_err(|reason| IoError::parse(i + 1, j + 1, format!("matrix[{i}][{j}]: {reason}")))?;
            parsed.push(value);
        }
        entries.push(parsed);
    }
    finish(entries, doc.labels, Format::Json)
}

fn finish(entries: Vec<Vec<f64>>, labels: Option<Vec<String>>, format: Format) -> Result<MatrixDocument, IoError> {
    check_square(&entries)?;
    check_positive(&entries)?;
    if let Some(l) = &labels {
        if l.len() != entries.len() {
            return Err(IoError::parse(
                1,
                1,
                format!("{} labels for a {}x{} matrix", l.len(), entries.len(), entries.len()),
            ));
        }
    }
    Ok(MatrixDocument::new(entries, labels, format))
}

/// Parses `text` in the given format.
pub fn parse_matrix(text: &str, format: Format) -> Result<MatrixDocument, IoError> {
    match format {
        Format::Csv => parse_csv(text),
        Format::Json => parse_json(text),
    }
}

/// Rounds `x` to `precision` significant digits and renders the shortest
/// decimal that parses back to the rounded value.
pub fn format_number(x: f64, precision: usize) -> String {
    round_significant(x, precision).to_string()
}

fn round_significant(x: f64, precision: usize) -> f64 {
    let digits = precision.clamp(1, 17);
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

/// Precision from `CONCORD_PRECISION`, falling back to [`DEFAULT_PRECISION`].
pub fn default_precision() -> usize {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&p: &usize| p > 0)
        .unwrap_or(DEFAULT_PRECISION)
}

/// Renders `doc` with `precision` significant digits per value.
pub fn emit_matrix(doc: &MatrixDocument, format: Format, precision: usize) -> String {
    match format {
        Format::Csv => {
            let mut out = String::new();
            if let Some(labels) = &doc.labels {
                out.push_str("#labels: ");
                out.push_str(&labels.join(","));
                out.push('\n');
            }
            for row in &doc.entries {
                let cells: Vec<String> = row.iter().map(|&v| format_number(v, precision)).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let matrix: Vec<Vec<Value>> = doc
                .entries
                .iter()
                .map(|row| row.iter().map(|&v| json!(round_significant(v, precision))).collect())
                .collect();
            let mut obj = serde_json::Map::new();
            if let Some(labels) = &doc.labels {
                obj.insert("labels".into(), json!(labels));
            }
            obj.insert("matrix".into(), json!(matrix));
            let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable");
            s.push('\n');
            s
        }
    }
}
