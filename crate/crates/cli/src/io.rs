//! Matrix text files and number formatting.
//!
//! A matrix file holds the dimension `n` on its first line followed by `n`
//! rows of `n` whitespace-separated reals. Blank lines are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use crate::CliError;

pub fn read_matrix(path: &Path) -> Result<DMatrix<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::validation("Io", format!("{}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|msg| CliError::validation("MatrixParse", format!("{}: {msg}", path.display())))
}

pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>, String> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or("empty file")?;
    let n: usize = header
        .parse()
        .map_err(|_| format!("first line {header:?} is not a dimension"))?;
    let mut entries = Vec::with_capacity(n * n);
    for row in 0..n {
        let line = lines.next().ok_or(format!("expected {n} rows, found {row}"))?;
        let values: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| format!("row {}: bad entry {t:?}", row + 1)))
            .collect::<Result<_, _>>()?;
        if values.len() != n {
            return Err(format!("row {} has {} entries, expected {n}", row + 1, values.len()));
        }
        entries.extend(values);
    }
    if lines.next().is_some() {
        return Err(format!("trailing content after {n} rows"));
    }
    Ok(DMatrix::from_row_slice(n, n, &entries))
}

pub fn write_matrix(m: &DMatrix<f64>) -> String {
    let mut out = format!("{}\n", m.nrows());
    for row in m.row_iter() {
        let cells: Vec<String> = row.iter().map(|&v| real(v)).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}

/// 17 significant digits, enough to reproduce every `f64` exactly.
pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn from_rows(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows.len();
    DMatrix::from_fn(n, rows.first().map_or(0, Vec::len), |i, j| rows[i][j])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let m = DMatrix::from_row_slice(2, 2, &[0.1, -2.5e-17, 3.0, 1.0 / 3.0]);
        assert_eq!(parse_matrix(&write_matrix(&m)).unwrap(), m);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_matrix("").is_err());
        assert!(parse_matrix("2\n1 2\n3").is_err());
        assert!(parse_matrix("2\n1 2\n3 4\n5 6").is_err());
        assert!(parse_matrix("x\n").is_err());
        assert!(parse_matrix("1\nfoo").is_err());
        assert_eq!(parse_matrix("\n1\n\n 7 \n").unwrap()[(0, 0)], 7.0);
    }

    #[test]
    fn real_is_exact() {
        for v in [0.1, 1.0 / 3.0, -1e-300, f64::MAX, 5e-324] {
            assert_eq!(real(v).parse::<f64>().unwrap(), v);
        }
    }
}
