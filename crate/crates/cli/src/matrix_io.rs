//! Matrix files: a JSON object `{"dim": n, "re": [[..]..], "im": [[..]..]}`
//! holding real and imaginary parts row by row.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use wradius_core::ComplexMatrix;

use crate::error::{CliError, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

/// Reads and validates a matrix file.
pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_matrix(&text, &path.display().to_string())
}

/// Parses matrix-file text; `origin` names the source in error messages.
pub fn parse_matrix(text: &str, origin: &str) -> Result<ComplexMatrix> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: origin.to_owned(),
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let n = file.dim;
    if n == 0 {
        return Err(CliError::Parse {
            path: origin.to_owned(),
            location: "field dim".into(),
            message: "dimension must be at least 1".into(),
        });
    }
    let re = flatten(&file.re, "re", n, origin)?;
    let im = flatten(&file.im, "im", n, origin)?;
    ComplexMatrix::from_parts(n, &re, &im).map_err(CliError::from)
}

fn flatten(rows: &[Vec<f64>], field: &str, n: usize, origin: &str) -> Result<Vec<f64>> {
    let mismatch = |field: String, found: usize| CliError::DimensionMismatch {
        path: origin.to_owned(),
        field,
        expected: n,
        found,
    };
    if rows.len() != n {
        return Err(mismatch(field.to_owned(), rows.len()));
    }
    let mut out = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(mismatch(format!("{field}[{i}]"), row.len()));
        }
        for (j, &x) in row.iter().enumerate() {
            if !x.is_finite() {
                return Err(CliError::Parse {
                    path: origin.to_owned(),
                    location: format!("field {field}[{i}][{j}]"),
                    message: "entry is not a finite number".into(),
                });
            }
            out.push(x);
        }
    }
    Ok(out)
}

/// Serialises a matrix in the file format read by [`read_matrix`].
pub fn matrix_to_json(a: &ComplexMatrix) -> String {
    let n = a.dim();
    let rows = |f: fn(&wradius_core::Complex64) -> f64| -> Vec<Vec<f64>> {
        (0..n).map(|i| (0..n).map(|j| f(&a[(i, j)])).collect()).collect()
    };
    let file = MatrixFile {
        dim: n,
        re: rows(|z| z.re),
        im: rows(|z| z.im),
    };
    serde_json::to_string(&file).expect("matrix file serialisation cannot fail")
}
