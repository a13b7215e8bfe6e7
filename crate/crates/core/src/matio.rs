//! Plain-text matrices: a first line `N`, then `N` rows of `N`
//! whitespace-separated `re,im` pairs.

use std::fs;
use std::path::Path;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::CMat;

fn parse_entry(tok: &str, line: usize) -> Result<C64> {
    let (re, im) = tok.split_once(',').ok_or_else(|| Error::Parse {
        line,
        msg: format!("expected re,im but found {tok:?}"),
    })?;
    let num = |s: &str| {
        s.trim().parse::<f64>().map_err(|e| Error::Parse { line, msg: format!("{s:?}: {e}") })
    };
    Ok(C64::new(num(re)?, num(im)?))
}

pub fn parse_matrix(text: &str) -> Result<CMat> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (first, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let n: usize = header.parse().map_err(|_| Error::Parse {
        line: first,
        msg: format!("expected the dimension N, found {header:?}"),
    })?;
    if n == 0 {
        return Err(Error::Parse { line: first, msg: "N must be positive".into() });
    }
    let mut m = CMat::zeros(n, n);
    for row in 0..n {
        let (line, text) = lines.next().ok_or(Error::Parse {
            line: first + row + 1,
            msg: format!("expected {n} rows, found {row}"),
        })?;
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks.len() != n {
            return Err(Error::Parse { line, msg: format!("expected {n} entries, found {}", toks.len()) });
        }
        for (col, tok) in toks.iter().enumerate() {
            m[(row, col)] = parse_entry(tok, line)?;
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse { line, msg: "trailing content after the last row".into() });
    }
    Ok(m)
}

/// Shortest round-trip representation of every entry.
pub fn format_matrix(m: &CMat) -> String {
    let mut out = format!("{}\n", m.nrows());
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|c| format!("{:e},{:e}", m[(r, c)].re, m[(r, c)].im))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_matrix(path: &Path) -> Result<CMat> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_matrix(&text)
}

pub fn write_matrix(path: &Path, m: &CMat) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("{:?} is not square", m.shape())));
    }
    fs::write(path, format_matrix(m)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_small_matrix() {
        let m = parse_matrix("2\n1,0 0.5,-0.25\n0.5,-0.25 2e-3,1\n").unwrap();
        assert_eq!(m[(0, 1)], C64::new(0.5, -0.25));
        assert_eq!(m[(1, 1)], C64::new(2e-3, 1.0));
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_matrix("2\n1,0 0,0\n1,0 x,0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(matches!(parse_matrix("2\n1,0 0,0\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_matrix("1\n1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_matrix(""), Err(Error::Parse { .. })));
    }
}
