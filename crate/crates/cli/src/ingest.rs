//! Trajectory files.
//!
//! Lines are comma-separated. Blank lines and lines starting with `#` are
//! skipped. The first remaining line may be a header; if so, columns are
//! picked by name and any others are ignored, so the tables written by the
//! binary can be read back. Without a header the first two columns are
//! `(time, value)`. Selected values must be finite numbers.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

/// Header names accepted for the time column, in order of preference.
const TIME_COLUMNS: &[&str] = &["t", "time"];
/// Header name for dimensionless exchange time, converted with `t = α/J`.
const ALPHA_COLUMN: &str = "alpha";

/// What the time column of a file measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeColumn {
    Time,
    Alpha,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<(f64, f64)>,
    pub time_column: TimeColumn,
}

impl Trajectory {
    /// Samples with the time column converted to physical time.
    pub fn in_time(&self, coupling: f64) -> Vec<(f64, f64)> {
        match self.time_column {
            TimeColumn::Time => self.samples.clone(),
            TimeColumn::Alpha => self
                .samples
                .iter()
                .map(|&(a, v)| (a / coupling, v))
                .collect(),
        }
    }
}

/// Reads a file, or standard input when `path` is `-`.
pub fn read_trajectory(path: &Path, value_columns: &[&str]) -> Result<Trajectory> {
    let text = if path == Path::new("-") {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        fs::read_to_string(path)?
    };
    parse_trajectory(&text, path, value_columns)
}

pub fn parse_trajectory(text: &str, path: &Path, value_columns: &[&str]) -> Result<Trajectory> {
    let err = |line: usize, message: String| CliError::Parse {
        path: PathBuf::from(path),
        line,
        message,
    };

    let mut columns = (0usize, 1usize);
    let mut time_column = TimeColumn::Time;
    let mut seen_data = false;
    let mut samples = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();

        if !seen_data && fields.iter().any(|f| f.parse::<f64>().is_err()) {
            seen_data = true;
            if fields.len() < 2 {
                return Err(err(line_no, "header needs at least two columns".into()));
            }
            let find = |names: &[&str]| {
                names
                    .iter()
                    .find_map(|n| fields.iter().position(|f| f == n))
            };
            let (t_idx, axis) = match find(TIME_COLUMNS) {
                Some(i) => (i, TimeColumn::Time),
                None => match find(&[ALPHA_COLUMN]) {
                    Some(i) => (i, TimeColumn::Alpha),
                    None => (0, TimeColumn::Time),
                },
            };
            let v_idx = find(value_columns).unwrap_or(if t_idx == 0 { 1 } else { 0 });
            columns = (t_idx, v_idx);
            time_column = axis;
            continue;
        }
        seen_data = true;

        let (ti, vi) = columns;
        if fields.len() <= ti.max(vi) {
            return Err(err(
                line_no,
                format!(
                    "expected at least {} columns, found {}",
                    ti.max(vi) + 1,
                    fields.len()
                ),
            ));
        }
        let (Ok(t), Ok(v)) = (fields[ti].parse::<f64>(), fields[vi].parse::<f64>()) else {
            return Err(err(
                line_no,
                format!("cannot parse numeric record '{line}'"),
            ));
        };
        if !t.is_finite() || !v.is_finite() {
            return Err(err(line_no, format!("non-finite value in '{line}'")));
        }
        samples.push((t, v));
    }

    if samples.is_empty() {
        return Err(err(0, "no data records".into()));
    }
    Ok(Trajectory {
        samples,
        time_column,
    })
}
