//! Text formats for matrices, vectors and spectra.
//!
//! Matrices are read either as MatrixMarket coordinate files (`real` or
//! `complex`; `general`, `symmetric` or `hermitian`) or in a dense format:
//!
//! ```text
//! dense <rows> <cols> complex
//! re im re im ...      (row-major, any line breaks)
//! ```
//!
//! Vectors are `n×1` matrices in either format. Written files use the dense
//! format with 17 significant digits, which round-trips exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, C64};
use crate::spectrum::{Spectrum, SpectrumMeta};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-empty, non-comment lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('%') && !l.starts_with('#'))
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| perr(line, format!("invalid number '{tok}'")))
}

pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    let first = text.lines().next().unwrap_or("").trim();
    if first.to_ascii_lowercase().starts_with("%%matrixmarket") {
        parse_matrix_market(text)
    } else {
        parse_dense(text)
    }
}

fn parse_matrix_market(text: &str) -> Result<CMatrix> {
    let header: Vec<String> = text.lines().next().unwrap_or("").split_whitespace().map(|s| s.to_ascii_lowercase()).collect();
    if header.len() < 5 || header[1] != "matrix" || header[2] != "coordinate" {
        return Err(perr(1, "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'"));
    }
    let complex = match header[3].as_str() {
        "complex" => true,
        "real" | "integer" => false,
        f => return Err(perr(1, format!("unsupported field '{f}'"))),
    };
    let symmetry = header[4].clone();
    if !matches!(symmetry.as_str(), "general" | "symmetric" | "hermitian") {
        return Err(perr(1, format!("unsupported symmetry '{symmetry}'")));
    }
    let mut lines = content_lines(text).skip_while(|(n, _)| *n == 1);
    let (size_line, size) = lines.next().ok_or_else(|| perr(1, "missing size line"))?;
    let dims: Vec<&str> = size.split_whitespace().collect();
    if dims.len() != 3 {
        return Err(perr(size_line, "size line must be '<rows> <cols> <entries>'"));
    }
    let rows: usize = parse_num(dims[0], size_line)?;
    let cols: usize = parse_num(dims[1], size_line)?;
    let nnz: usize = parse_num(dims[2], size_line)?;
    let mut m = CMatrix::zeros(rows, cols);
    let mut count = 0;
    let want = if complex { 4 } else { 3 };
    for (ln, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != want {
            return Err(perr(ln, format!("expected {want} fields, found {}", toks.len())));
        }
        let i: usize = parse_num(toks[0], ln)?;
        let j: usize = parse_num(toks[1], ln)?;
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(perr(ln, format!("index ({i}, {j}) outside {rows}x{cols}")));
        }
        let re: f64 = parse_num(toks[2], ln)?;
        let im: f64 = if complex { parse_num(toks[3], ln)? } else { 0.0 };
        let z = C64::new(re, im);
        m[(i - 1, j - 1)] = z;
        if i != j {
            match symmetry.as_str() {
                "symmetric" => m[(j - 1, i - 1)] = z,
                "hermitian" => m[(j - 1, i - 1)] = z.conj(),
                _ => {}
            }
        }
        count += 1;
    }
    if count != nnz {
        return Err(Error::DimensionMismatch(format!("header declares {nnz} entries, found {count}")));
    }
    Ok(m)
}

fn parse_dense(text: &str) -> Result<CMatrix> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty matrix file"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "dense" || !matches!(toks[3], "complex" | "real") {
        return Err(perr(hl, "expected 'dense <rows> <cols> complex|real'"));
    }
    let rows: usize = parse_num(toks[1], hl)?;
    let cols: usize = parse_num(toks[2], hl)?;
    let complex = toks[3] == "complex";
    let per = if complex { 2 } else { 1 };
    let mut vals: Vec<f64> = Vec::with_capacity(rows * cols * per);
    let mut last_line = hl;
    for (ln, l) in lines {
        last_line = ln;
        for t in l.split_whitespace() {
            vals.push(parse_num(t, ln)?);
        }
        if vals.len() > rows * cols * per {
            return Err(perr(ln, format!("more than {} values for a {rows}x{cols} matrix", rows * cols)));
        }
    }
    if vals.len() != rows * cols * per {
        return Err(perr(
            last_line,
            format!("expected {} values for a {rows}x{cols} matrix, found {}", rows * cols * per, vals.len()),
        ));
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| {
        let k = (i * cols + j) * per;
        C64::new(vals[k], if complex { vals[k + 1] } else { 0.0 })
    }))
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<CMatrix> {
    parse_matrix(&fs::read_to_string(path)?)
}

/// Reads an `n×1` (or `1×n`) matrix as a vector.
pub fn read_vector(path: impl AsRef<Path>) -> Result<CVector> {
    let m = read_matrix(path)?;
    if m.ncols() == 1 {
        Ok(m.column(0).into_owned())
    } else if m.nrows() == 1 {
        Ok(m.row(0).transpose())
    } else {
        Err(Error::DimensionMismatch(format!("expected a vector, found a {}x{} matrix", m.nrows(), m.ncols())))
    }
}

/// `{:e}` with 17 significant digits.
fn exact(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn format_matrix(m: &CMatrix) -> String {
    let mut s = format!("dense {} {} complex\n", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{} {}", exact(m[(i, j)].re), exact(m[(i, j)].im))).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

pub fn write_matrix(m: &CMatrix, path: impl AsRef<Path>) -> Result<()> {
    Ok(fs::write(path, format_matrix(m))?)
}

pub fn write_vector(v: &CVector, path: impl AsRef<Path>) -> Result<()> {
    write_matrix(&CMatrix::from_column_slice(v.len(), 1, v.as_slice()), path)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpectrumFormat {
    #[default]
    Csv,
    Tsv,
}

impl SpectrumFormat {
    fn delimiter(self) -> char {
        match self {
            SpectrumFormat::Csv => ',',
            SpectrumFormat::Tsv => '\t',
        }
    }
}

/// `{:e}` with 12 significant digits.
fn short(x: f64) -> String {
    // Avoid "-0.00000000000e0" for values that round to zero.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

pub fn format_spectrum(s: &Spectrum, format: SpectrumFormat) -> String {
    let d = format.delimiter();
    let mut out = String::new();
    match &s.imag {
        None => {
            let _ = writeln!(out, "# omega{d}epsilon");
            for (w, e) in s.omegas.iter().zip(&s.values) {
                let _ = writeln!(out, "{}{d}{}", short(*w), short(*e));
            }
        }
        Some(im) => {
            let _ = writeln!(out, "# omega{d}re{d}im");
            for ((w, e), i) in s.omegas.iter().zip(&s.values).zip(im) {
                let _ = writeln!(out, "{}{d}{}{d}{}", short(*w), short(*e), short(*i));
            }
        }
    }
    out
}

pub fn write_spectrum(s: &Spectrum, path: impl AsRef<Path>, format: SpectrumFormat) -> Result<()> {
    Ok(fs::write(path, format_spectrum(s, format))?)
}

/// Sampled curve read back from a spectrum file.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub omegas: Vec<f64>,
    pub values: Vec<f64>,
    pub imag: Option<Vec<f64>>,
}

impl SpectrumTable {
    pub fn into_spectrum(self, meta: SpectrumMeta) -> Spectrum {
        Spectrum {
            omegas: self.omegas,
            values: self.values,
            imag: self.imag,
            meta,
        }
    }
}

pub fn parse_spectrum(text: &str) -> Result<SpectrumTable> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (_, header) = lines.next().ok_or_else(|| perr(1, "empty spectrum file"))?;
    let cols: Vec<&str> = header.trim_start_matches('#').split([',', '\t']).map(str::trim).collect();
    let complex = match cols.as_slice() {
        ["omega", "epsilon"] => false,
        ["omega", "re", "im"] => true,
        _ => return Err(perr(1, "expected header '# omega,epsilon' or '# omega,re,im'")),
    };
    let want = if complex { 3 } else { 2 };
    let mut t = SpectrumTable {
        omegas: Vec::new(),
        values: Vec::new(),
        imag: complex.then(Vec::new),
    };
    for (ln, l) in lines {
        let toks: Vec<&str> = l.split([',', '\t']).map(str::trim).collect();
        if toks.len() != want {
            return Err(perr(ln, format!("expected {want} columns, found {}", toks.len())));
        }
        t.omegas.push(parse_num(toks[0], ln)?);
        t.values.push(parse_num(toks[1], ln)?);
        if let Some(im) = t.imag.as_mut() {
            im.push(parse_num(toks[2], ln)?);
        }
    }
    Ok(t)
}

pub fn read_spectrum(path: impl AsRef<Path>) -> Result<SpectrumTable> {
    parse_spectrum(&fs::read_to_string(path)?)
}
