//! Spectrum files (one eigenvalue per line) and matrix files (row-major,
//! whitespace-separated). Both accept `#` comments and blank lines.

use std::path::Path;

use super::SpectrumModel;
use crate::error::{Error, Result};

pub fn read_spectrum(path: &Path) -> Result<SpectrumModel> {
    parse_spectrum(&std::fs::read_to_string(path)?)
}

/// Parses eigenvalues and sorts them ascending.
pub fn parse_spectrum(text: &str) -> Result<SpectrumModel> {
    let mut values = Vec::new();
    for (line, content) in data_lines(text) {
        let v: f64 = content.parse().map_err(|e| Error::Format {
            line,
            message: format!("bad eigenvalue {content:?}: {e}"),
        })?;
        values.push(v);
    }
    values.sort_by(f64::total_cmp);
    SpectrumModel::truncated(values)
}

pub fn read_matrix(path: &Path) -> Result<Vec<Vec<f64>>> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn parse_matrix(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (line, content) in data_lines(text) {
        let row = content
            .split_whitespace()
            .map(|x| {
                x.parse::<f64>().map_err(|e| Error::Format {
                    line,
                    message: format!("bad entry {x:?}: {e}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let content = l.split('#').next().unwrap().trim();
        (!content.is_empty()).then_some((i + 1, content))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_with_comments() {
        let s = parse_spectrum("# eigenvalues\n16\n4 # smallest\n\n64\n").unwrap();
        assert_eq!(s.eigenvalues(), &[4.0, 16.0, 64.0]);
        assert!(matches!(parse_spectrum("1\nx\n"), Err(Error::Format { line: 2, .. })));
        assert!(parse_spectrum("# nothing\n").is_err());
    }

    #[test]
    fn matrix_rows() {
        let m = parse_matrix("2 1\n# c\n1 2\n").unwrap();
        assert_eq!(m, vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
    }
}
