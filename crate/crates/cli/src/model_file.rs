//! Plain-text model files.
//!
//! ```text
//! ss n q p
//! <n rows of n reals>   A
//! <n rows of q reals>   B
//! <p rows of n reals>   C
//! <p rows of q reals>   D
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use aaa_mor_core::StateSpace;
use nalgebra::DMatrix;

use crate::error::{CliError, Result};

fn parse_real(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| CliError::Parse(format!("line {line}: `{tok}` is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::Parse(format!("line {line}: non-finite entry `{tok}`")));
    }
    Ok(v)
}

fn parse_dim(tok: Option<&str>, name: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| CliError::Parse(format!("header is missing `{name}`")))?;
    tok.parse()
        .map_err(|_| CliError::Parse(format!("header field `{name}` = `{tok}` is not a count")))
}

pub fn parse(text: &str) -> Result<StateSpace> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (_, header) = lines.next().ok_or_else(|| CliError::Parse("empty model file".into()))?;
    let mut fields = header.split_whitespace();
    if fields.next() != Some("ss") {
        return Err(CliError::Parse(format!("expected header `ss n q p`, found `{header}`")));
    }
    let n = parse_dim(fields.next(), "n")?;
    let q = parse_dim(fields.next(), "q")?;
    let p = parse_dim(fields.next(), "p")?;
    if let Some(extra) = fields.next() {
        return Err(CliError::Parse(format!("unexpected `{extra}` after header")));
    }

    let mut read = |name: &str, rows: usize, cols: usize| -> Result<DMatrix<f64>> {
        let mut m = DMatrix::zeros(rows, cols);
        for i in 0..rows {
            let (ln, line) = lines.next().ok_or_else(|| {
                CliError::Dimension(format!("{name} needs {rows} rows, file ended after {i}"))
            })?;
            let vals = line
                .split_whitespace()
                .map(|t| parse_real(t, ln))
                .collect::<Result<Vec<_>>>()?;
            if vals.len() != cols {
                return Err(CliError::Dimension(format!(
                    "line {ln}: {name} row has {} entries, expected {cols}",
                    vals.len()
                )));
            }
            for (j, v) in vals.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    };
    let a = read("A", n, n)?;
    let b = read("B", n, q)?;
    let c = read("C", p, n)?;
    let d = read("D", p, q)?;
    if let Some((ln, _)) = lines.next() {
        return Err(CliError::Dimension(format!("line {ln}: trailing data after D")));
    }
    Ok(StateSpace::new(a, b, c, d)?)
}

/// Whitespace-delimited dump of A, B, C and optionally D, row-major, with
/// the dimensions supplied separately. A missing D is taken as zero.
pub fn parse_raw(text: &str, n: usize, q: usize, p: usize) -> Result<StateSpace> {
    let vals = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('#'))
        .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)))
        .map(|(ln, t)| parse_real(t, ln))
        .collect::<Result<Vec<_>>>()?;
    let core = n * n + n * q + p * n;
    let full = core + p * q;
    if vals.len() != core && vals.len() != full {
        return Err(CliError::Dimension(format!(
            "raw dump has {} values, expected {core} (no D) or {full}",
            vals.len()
        )));
    }
    let mut off = 0;
    let mut take = |rows: usize, cols: usize| {
        let m = DMatrix::from_row_slice(rows, cols, &vals[off..off + rows * cols]);
        off += rows * cols;
        m
    };
    let a = take(n, n);
    let b = take(n, q);
    let c = take(p, n);
    let d = if vals.len() == full { take(p, q) } else { DMatrix::zeros(p, q) };
    Ok(StateSpace::new(a, b, c, d)?)
}

/// Writes with shortest round-trip formatting, so `parse(format(g)) == g`.
pub fn format(sys: &StateSpace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ss {} {} {}", sys.states(), sys.inputs(), sys.outputs());
    for m in [sys.a(), sys.b(), sys.c(), sys.d()] {
        for i in 0..m.nrows() {
            let row: Vec<String> = m.row(i).iter().map(|v| format!("{v:?}")).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    out
}

pub fn read(path: &Path) -> Result<StateSpace> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse(&text)
}

pub fn write(path: &Path, sys: &StateSpace) -> Result<()> {
    std::fs::write(path, format(sys)).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "# first order\nss 1 1 1\n-1\n1\n\n1\n0\n";

    #[test]
    fn parses_sample() {
        let g = parse(SAMPLE).unwrap();
        assert_eq!((g.states(), g.inputs(), g.outputs()), (1, 1, 1));
        assert_eq!(g.a()[(0, 0)], -1.0);
    }

    #[test]
    fn rejects_nan_and_inf() {
        for bad in ["NaN", "inf", "-inf"] {
            let text = SAMPLE.replace("\n-1\n", &format!("\n{bad}\n"));
            assert!(matches!(parse(&text), Err(CliError::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn short_row_is_dimension_error() {
        let text = "ss 2 1 1\n-1 0\n0\n1\n1\n1 1\n0\n";
        assert!(matches!(parse(text), Err(CliError::Dimension(_))));
    }

    #[test]
    fn round_trip_keeps_awkward_values() {
        let text = "ss 2 1 1\n-0.1 1e-300\n3.0000000000000004 -2e20\n0.1\n-0\n1 2\n0.30000000000000004\n";
        let g = parse(text).unwrap();
        assert_eq!(parse(&format(&g)).unwrap(), g);
    }

    #[test]
    fn raw_without_d() {
        let g = parse_raw("-1 0\n0 -2\n1 1\n1 0\n", 2, 1, 1).unwrap();
        assert_eq!(g.d()[(0, 0)], 0.0);
        assert_eq!(g.c()[(0, 0)], 1.0);
        assert!(matches!(parse_raw("1 2 3", 2, 1, 1), Err(CliError::Dimension(_))));
    }
}
