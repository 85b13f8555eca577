//! Plain-text reflectivity data: columns `q R [dR] [ignored...]`, separated
//! by whitespace or commas, with `#` comment lines.

use std::fmt::Write as _;
use std::path::Path;

use refl_core::{Dataset, ReflectivityCurve};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DataError {
    #[error("cannot read data file {path}: {message}")]
    Read { path: String, message: String },

    #[error("line {line}, column {column}: '{text}' is not a number")]
    NonNumeric {
        line: usize,
        column: usize,
        text: String,
    },

    #[error("line {line}: q must be > 0, got {q}")]
    NonPositiveQ { line: usize, q: f64 },

    #[error("line {line}: uncertainty must be > 0, got {dr}")]
    NonPositiveUncertainty { line: usize, dr: f64 },

    #[error("line {line}: duplicate q = {q} (first seen on line {first})")]
    DuplicateQ { line: usize, first: usize, q: f64 },

    #[error("line {line}: expected at least 2 columns (q, R), found {found}")]
    TooFewColumns { line: usize, found: usize },

    #[error("line {line}: has {found} columns but earlier rows have {expected}")]
    InconsistentColumns {
        line: usize,
        found: usize,
        expected: usize,
    },

    #[error("no data rows")]
    Empty,

    #[error(
        "the data has no uncertainty column; supply dR as a third column (q R dR) to fit or sample"
    )]
    MissingUncertainty,

    #[error("{0}")]
    Invalid(String),
}

/// A parsed data file: with uncertainties it is a fittable [`Dataset`].
#[derive(Debug, Clone, PartialEq)]
pub enum Measurement {
    Dataset(Dataset),
    Curve(ReflectivityCurve),
}

impl Measurement {
    pub fn curve(&self) -> &ReflectivityCurve {
        match self {
            Self::Dataset(d) => d.curve(),
            Self::Curve(c) => c,
        }
    }

    pub fn into_dataset(self) -> Result<Dataset, DataError> {
        match self {
            Self::Dataset(d) => Ok(d),
            Self::Curve(_) => Err(DataError::MissingUncertainty),
        }
    }
}

pub fn read_reflectivity_file(path: &Path) -> Result<Measurement, DataError> {
    let text = std::fs::read_to_string(path).map_err(|e| DataError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_reflectivity(&text)
}

struct Row {
    line: usize,
    values: [f64; 3],
}

pub fn parse_reflectivity(text: &str) -> Result<Measurement, DataError> {
    let mut rows: Vec<Row> = Vec::new();
    let mut width = None;
    let mut warned = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        if fields.len() < 2 {
            return Err(DataError::TooFewColumns {
                line,
                found: fields.len(),
            });
        }
        let used = fields.len().min(3);
        match width {
            None => width = Some(used),
            Some(expected) if expected != used => {
                return Err(DataError::InconsistentColumns {
                    line,
                    found: used,
                    expected,
                })
            }
            _ => {}
        }
        if fields.len() > 3 && !warned {
            log::warn!(
                "line {line}: ignoring columns beyond q, R, dR (resolution smearing is not supported)"
            );
            warned = true;
        }
        let mut values = [0.0; 3];
        for (column, field) in fields.iter().take(used).enumerate() {
            values[column] = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| DataError::NonNumeric {
                    line,
                    column: column + 1,
                    text: field.to_string(),
                })?;
        }
        if values[0] <= 0.0 {
            return Err(DataError::NonPositiveQ { line, q: values[0] });
        }
        if used == 3 && values[2] <= 0.0 {
            return Err(DataError::NonPositiveUncertainty {
                line,
                dr: values[2],
            });
        }
        rows.push(Row { line, values });
    }
    let width = width.ok_or(DataError::Empty)?;
    rows.sort_by(|a, b| {
        a.values[0]
            .total_cmp(&b.values[0])
            .then(a.line.cmp(&b.line))
    });
    for pair in rows.windows(2) {
        if pair[0].values[0] == pair[1].values[0] {
            return Err(DataError::DuplicateQ {
                line: pair[1].line,
                first: pair[0].line,
                q: pair[1].values[0],
            });
        }
    }
    let column = |c: usize| rows.iter().map(|r| r.values[c]).collect::<Vec<f64>>();
    let invalid = |e: refl_core::Error| DataError::Invalid(e.to_string());
    if width == 3 {
        Dataset::from_columns(column(0), column(1), column(2))
            .map(Measurement::Dataset)
            .map_err(invalid)
    } else {
        ReflectivityCurve::new(column(0), column(1), None)
            .map(Measurement::Curve)
            .map_err(invalid)
    }
}

/// Columns with a header comment, one row per index.
pub fn format_columns(header: &[&str], columns: &[&[f64]]) -> String {
    let mut out = format!("# {}\n", header.join(" "));
    let rows = columns.first().map_or(0, |c| c.len());
    for i in 0..rows {
        let line: Vec<String> = columns.iter().map(|c| format!("{:e}", c[i])).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}
