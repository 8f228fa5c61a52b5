//! Plain-text matrix pair files.
//!
//! ```text
//! n 2 hermitian
//! 1+0i 0+0i
//! 0+0i -1+0i
//!
//! 0+0i 1+0i
//! 1+0i 0+0i
//! ```
//!
//! The header gives the dimension and the kind (`hermitian` or `positive`). The
//! rows of `H` follow, then a blank line, then the rows of `K`. Entries are
//! complex numbers written `a+bi`, `a-bi`, `a` or `bi`. Lines starting with `#`
//! are ignored.

use std::fmt;
use std::str::FromStr;

use crate::linalg::{ComplexMatrix, HermitianMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixKind {
    Hermitian,
    /// Hermitian with strictly positive spectrum.
    Positive,
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixKind::Hermitian => "hermitian",
            MatrixKind::Positive => "positive",
        })
    }
}

impl FromStr for MatrixKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "hermitian" => Ok(MatrixKind::Hermitian),
            "positive" => Ok(MatrixKind::Positive),
            other => Err(format!(
                "unknown kind `{other}` (expected hermitian or positive)"
            )),
        }
    }
}

/// A parse or validation failure, located at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for FileError {}

fn error(line: usize, column: usize, message: impl Into<String>) -> FileError {
    FileError {
        line,
        column,
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFile {
    pub kind: MatrixKind,
    pub h: HermitianMatrix,
    pub k: HermitianMatrix,
    /// Largest asymmetry `max |a_ij - conj(a_ji)|` removed by symmetrization.
    pub residual: f64,
}

/// Parses `a+bi`, `a-bi`, `a`, `bi`, `i`, `-i`. Non-finite parts are rejected.
pub fn parse_complex(token: &str) -> Option<C64> {
    let finite = |s: &str| s.parse::<f64>().ok().filter(|v| v.is_finite());
    let Some(body) = token.strip_suffix('i') else {
        return finite(token).map(|re| C64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let imaginary = |s: &str| match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        s => finite(s),
    };
    match split {
        Some(i) => Some(C64::new(finite(&body[..i])?, imaginary(&body[i..])?)),
        None => Some(C64::new(0.0, imaginary(body)?)),
    }
}

/// Shortest round-trip decimal of a complex number in `a+bi` form.
pub fn format_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:?}{sign}{:?}i", z.re, z.im.abs())
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next non-comment line as `(line number, text)`.
    fn next(&mut self) -> Option<(usize, &'a str)> {
        for (i, l) in self.inner.by_ref() {
            self.last = i + 1;
            if !l.trim_start().starts_with('#') {
                return Some((i + 1, l));
            }
        }
        None
    }
}

/// `(column, token)` pairs with 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (idx, ch)) in line.char_indices().enumerate() {
        if ch.is_whitespace() {
            if let Some((c0, i0)) = start.take() {
                out.push((c0, &line[i0..idx]));
            }
        } else if start.is_none() {
            start = Some((col + 1, idx));
        }
    }
    if let Some((c0, i0)) = start {
        out.push((c0, &line[i0..]));
    }
    out
}

fn read_matrix(
    lines: &mut Lines<'_>,
    n: usize,
    name: &str,
) -> Result<(usize, ComplexMatrix), FileError> {
    let mut data = Vec::with_capacity(n * n);
    let mut first_line = 0;
    for row in 1..=n {
        let (line_no, line) = match lines.next() {
            Some((no, l)) if !l.trim().is_empty() => (no, l),
            Some((no, _)) => {
                return Err(error(
                    no,
                    1,
                    format!("expected row {row} of {name}, found a blank line"),
                ))
            }
            None => {
                return Err(error(
                    lines.last + 1,
                    1,
                    format!("expected row {row} of {name}, found end of file"),
                ))
            }
        };
        if row == 1 {
            first_line = line_no;
        }
        let toks = tokens(line);
        if toks.len() != n {
            let column = toks.get(n).map_or(line.len() + 1, |t| t.0);
            return Err(error(
                line_no,
                column,
                format!(
                    "row {row} of {name} has {} entries, expected {n}",
                    toks.len()
                ),
            ));
        }
        for (column, tok) in toks {
            let z = parse_complex(tok).ok_or_else(|| {
                error(
                    line_no,
                    column,
                    format!("`{tok}` is not a finite complex number"),
                )
            })?;
            data.push(z);
        }
    }
    let m = ComplexMatrix::from_row_major(n, data).expect("entry count checked");
    Ok((first_line, m))
}

fn validate(
    m: ComplexMatrix,
    kind: MatrixKind,
    name: &str,
    line: usize,
) -> Result<(HermitianMatrix, f64), FileError> {
    let residual = m.hermitian_residual();
    let h = HermitianMatrix::new(m).map_err(|e| error(line, 1, format!("{name}: {e}")))?;
    if kind == MatrixKind::Positive {
        let spectrum = h
            .eig()
            .map_err(|e| error(line, 1, format!("{name}: {e}")))?
            .eigenvalues;
        let min = spectrum[spectrum.len() - 1];
        if !(min > 0.0) {
            return Err(error(
                line,
                1,
                format!("{name} is declared positive but has eigenvalue {min:e}"),
            ));
        }
    }
    Ok((h, residual))
}

pub fn parse_matrix_file(text: &str) -> Result<MatrixFile, FileError> {
    let mut lines = Lines::new(text);
    let (line_no, header) = loop {
        match lines.next() {
            Some((_, l)) if l.trim().is_empty() => continue,
            Some(found) => break found,
            None => return Err(error(1, 1, "empty file: expected header `n <dim> <kind>`")),
        }
    };
    let head = tokens(header);
    let col = |i: usize| head.get(i).map_or(header.len() + 1, |t| t.0);
    if head.first().map(|t| t.1) != Some("n") || head.len() != 3 {
        return Err(error(line_no, 1, "header must read `n <dim> <kind>`"));
    }
    let n: usize = head[1].1.parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
        error(
            line_no,
            col(1),
            format!("`{}` is not a positive dimension", head[1].1),
        )
    })?;
    let kind: MatrixKind = head[2].1.parse().map_err(|e| error(line_no, col(2), e))?;

    let (h_line, h) = read_matrix(&mut lines, n, "H")?;
    match lines.next() {
        Some((_, l)) if l.trim().is_empty() => {}
        Some((no, _)) => {
            return Err(error(
                no,
                1,
                format!("H has {n} rows; expected a blank line before K"),
            ))
        }
        None => return Err(error(lines.last + 1, 1, "missing K after H")),
    }
    let (k_line, k) = read_matrix(&mut lines, n, "K")?;
    while let Some((no, l)) = lines.next() {
        if !l.trim().is_empty() {
            return Err(error(
                no,
                1,
                format!("K has {n} rows; unexpected trailing content"),
            ));
        }
    }
    let (h, rh) = validate(h, kind, "H", h_line)?;
    let (k, rk) = validate(k, kind, "K", k_line)?;
    Ok(MatrixFile {
        kind,
        h,
        k,
        residual: rh.max(rk),
    })
}

pub fn write_matrix_file(h: &ComplexMatrix, k: &ComplexMatrix, kind: MatrixKind) -> String {
    let n = h.dim();
    let mut s = format!("n {n} {kind}\n");
    for (i, m) in [h, k].into_iter().enumerate() {
        if i == 1 {
            s.push('\n');
        }
        for r in 0..n {
            let row: Vec<String> = (0..n).map(|c| format_complex(m[(r, c)])).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
    }
    s
}
