//! MatrixMarket reading and writing for dense real matrices.
//!
//! Coordinate and array layouts are accepted with `real`, `integer` or
//! `complex` fields (complex only when every imaginary part is zero) and
//! `general`, `symmetric` or `skew-symmetric` symmetry.

use std::fmt::Write as _;
use std::path::Path;

use zgv_core::dense::ComplexMatrix;
use zgv_core::C;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Layout {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Symmetry {
    General,
    Symmetric,
    Skew,
}

/// Parses MatrixMarket text; `name` labels error messages.
pub fn parse_matrix_market(text: &str, name: &str) -> CliResult<ComplexMatrix<f64>> {
    let err = |line: usize, message: String| CliError::Parse {
        file: name.to_string(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (hline, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(err(hline, "expected '%%MatrixMarket matrix <layout> <field> <symmetry>'".into()));
    }
    let layout = match tokens[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(err(hline, format!("unsupported layout '{other}'"))),
    };
    let complex = match tokens[3].as_str() {
        "real" | "integer" | "double" => false,
        "complex" => true,
        other => return Err(err(hline, format!("unsupported field '{other}'"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::Skew,
        other => return Err(err(hline, format!("unsupported symmetry '{other}'"))),
    };
    let mut body = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (sline, size) = body.next().ok_or_else(|| err(hline, "missing size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| err(sline, format!("bad size entry '{t}'"))))
        .collect::<CliResult<_>>()?;
    let (rows, cols) = match (layout, dims.as_slice()) {
        (Layout::Coordinate, [r, c, _]) | (Layout::Array, [r, c]) => (*r, *c),
        _ => return Err(err(sline, "wrong number of size entries".into())),
    };
    if symmetry != Symmetry::General && rows != cols {
        return Err(err(sline, "symmetric storage needs a square matrix".into()));
    }
    let mut a = ComplexMatrix::<f64>::zeros(rows, cols);
    let mut nonreal = false;
    let mut read_value = |line: usize, toks: &[&str]| -> CliResult<f64> {
        let want = if complex { 2 } else { 1 };
        if toks.len() != want {
            return Err(err(line, format!("expected {want} value(s), found {}", toks.len())));
        }
        let parse = |t: &str| t.parse::<f64>().map_err(|_| err(line, format!("bad number '{t}'")));
        let re = parse(toks[0])?;
        if complex && parse(toks[1])? != 0.0 {
            nonreal = true;
        }
        if !re.is_finite() {
            return Err(err(line, "non-finite value".into()));
        }
        Ok(re)
    };
    let place = |a: &mut ComplexMatrix<f64>, i: usize, j: usize, v: f64| {
        a[(i, j)] = C::new(v, 0.0);
        match symmetry {
            Symmetry::Symmetric if i != j => a[(j, i)] = C::new(v, 0.0),
            Symmetry::Skew if i != j => a[(j, i)] = C::new(-v, 0.0),
            _ => {}
        }
    };
    match layout {
        Layout::Coordinate => {
            let nnz = dims[2];
            for _ in 0..nnz {
                let (line, l) = body.next().ok_or_else(|| err(sline, format!("expected {nnz} entries")))?;
                let toks: Vec<&str> = l.split_whitespace().collect();
                if toks.len() < 2 {
                    return Err(err(line, "missing indices".into()));
                }
                let idx = |t: &str, n: usize| -> CliResult<usize> {
                    match t.parse::<usize>() {
                        Ok(v) if v >= 1 && v <= n => Ok(v - 1),
                        _ => Err(err(line, format!("index '{t}' out of range 1..={n}"))),
                    }
                };
                let (i, j) = (idx(toks[0], rows)?, idx(toks[1], cols)?);
                if symmetry != Symmetry::General && i < j {
                    return Err(err(line, "symmetric storage lists the lower triangle only".into()));
                }
                let v = read_value(line, &toks[2..])?;
                place(&mut a, i, j, v);
            }
        }
        Layout::Array => {
            for j in 0..cols {
                let first = match symmetry {
                    Symmetry::General => 0,
                    Symmetry::Symmetric => j,
                    Symmetry::Skew => j + 1,
                };
                for i in first..rows {
                    let (line, l) = body.next().ok_or_else(|| err(sline, "too few array entries".into()))?;
                    let toks: Vec<&str> = l.split_whitespace().collect();
                    let v = read_value(line, &toks)?;
                    place(&mut a, i, j, v);
                }
            }
        }
    }
    if let Some((line, _)) = body.next() {
        return Err(err(line, "unexpected trailing data".into()));
    }
    if nonreal {
        return Err(CliError::NonRealEntries(name.to_string()));
    }
    Ok(a)
}

pub fn read_matrix_market(path: &Path) -> CliResult<ComplexMatrix<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_matrix_market(&text, &path.display().to_string())
}

/// Array-general text of the real part; values round-trip exactly.
pub fn format_matrix_market(a: &ComplexMatrix<f64>) -> String {
    let mut s = String::from("%%MatrixMarket matrix array real general\n");
    let _ = writeln!(s, "{} {}", a.rows(), a.cols());
    for v in a.as_slice() {
        let _ = writeln!(s, "{:e}", v.re);
    }
    s
}

pub fn write_matrix_market(path: &Path, a: &ComplexMatrix<f64>) -> CliResult<()> {
    std::fs::write(path, format_matrix_market(a)).map_err(|e| CliError::io(path, e))
}
