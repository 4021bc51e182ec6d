//! Matrix file formats.
//!
//! JSON: `{"dim": 2n, "data": [[...], ...]}`, rows as arrays of numbers.
//! Text: `2n` lines of `2n` whitespace-separated numbers; blank lines and
//! lines starting with `#` are skipped.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_finite, half_dim, RealMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub data: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &RealMatrix) -> Self {
        Self {
            dim: m.nrows(),
            data: (0..m.nrows())
                .map(|i| m.row(i).iter().copied().collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<RealMatrix> {
        let m = rows_to_matrix(&self.data)?;
        if m.nrows() != self.dim {
            return Err(Error::Parse(format!(
                "declared dim {} but found {} rows",
                self.dim,
                m.nrows()
            )));
        }
        Ok(m)
    }
}

fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<RealMatrix> {
    let nrows = rows.len();
    if nrows == 0 {
        return Err(Error::Empty);
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != nrows {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {nrows} (matrix must be square)",
                r.len()
            )));
        }
    }
    let m = RealMatrix::from_fn(nrows, nrows, |i, j| rows[i][j]);
    half_dim(&m)?;
    check_finite(&m)?;
    Ok(m)
}

/// Parses either format; JSON is recognized by a leading `{`.
pub fn parse_matrix(text: &str) -> Result<RealMatrix> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let file: MatrixFile =
            serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
        file.to_matrix()
    } else {
        let rows = trimmed
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .enumerate()
            .map(|(i, line)| {
                line.split_whitespace()
                    .map(|tok| {
                        tok.parse::<f64>()
                            .map_err(|e| Error::Parse(format!("row {i}: {tok:?}: {e}")))
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        rows_to_matrix(&rows)
    }
}

pub fn matrix_to_json(m: &RealMatrix) -> String {
    serde_json::to_string_pretty(&MatrixFile::from_matrix(m)).expect("finite matrices serialize")
}

pub fn matrix_to_text(m: &RealMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = m.row(i).iter().map(|v| format!("{v:e}")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// A vector given as a JSON array, comma-separated list or whitespace-
/// separated numbers.
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    let trimmed = text.trim();
    let v: Vec<f64> = if trimmed.starts_with('[') {
        serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?
    } else {
        trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
            })
            .collect::<Result<_>>()?
    };
    if v.is_empty() {
        return Err(Error::Empty);
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Parse("vector contains a non-finite entry".into()));
    }
    Ok(v)
}
