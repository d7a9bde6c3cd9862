//! Text formats: matrices as CSV of `num/den` entries and traces as labelled
//! CSV blocks.

use std::fmt::{self, Write as _};

use crate::arith::{parse_rational, rational_to_string, ArithError, Matrix, Rational};
use crate::restoration::MatrixTrace;

/// Parses one matrix row per line. Blank lines and lines starting with `#`
/// are skipped; rows must have equal length.
pub fn parse_matrix_csv(text: &str) -> Result<Matrix<Rational>, ArithError> {
    let rows = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split(',')
                .map(|c| parse_rational(c.trim()))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let width = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || width == 0 {
        return Err(ArithError::EmptyMatrix);
    }
    if rows.iter().any(|r| r.len() != width) {
        return Err(ArithError::Parse {
            what: "matrix",
            input: "rows of unequal length".into(),
        });
    }
    Ok(Matrix::from_rows(rows))
}

pub fn format_matrix_csv(x: &Matrix<Rational>) -> String {
    let mut out = String::new();
    for r in 0..x.rows() {
        let cells: Vec<String> = x.row(r).iter().map(rational_to_string).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Matrix rows as strings, for JSON output.
pub fn matrix_to_strings<T: fmt::Display>(x: &Matrix<T>) -> Vec<Vec<String>> {
    (0..x.rows())
        .map(|r| x.row(r).iter().map(ToString::to_string).collect())
        .collect()
}

/// One block per step: the label `(j,b)` on its own line, then the matrix
/// rows, then a blank line.
pub fn format_trace<T: fmt::Display>(trace: &MatrixTrace<T>) -> String {
    let mut out = String::new();
    for (r, x) in trace.iter() {
        let _ = writeln!(out, "{r}");
        let _ = write!(out, "{x}");
        out.push('\n');
    }
    out
}
