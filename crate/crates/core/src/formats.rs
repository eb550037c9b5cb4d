//! Text file formats.
//!
//! * Edge files (metrics and weights): one `vi vj value` line per edge in
//!   canonical order, 1-based vertex ids, 17 significant digits.
//! * Laplace matrices: Matrix Market `coordinate real symmetric`, lower
//!   triangle.
//! * Heat kernels: a `n t` header line followed by `n` rows of `n` values.
//! * Double-cover correspondence: `orig_edge cover_edge1 [cover_edge2]`,
//!   1-based edge indices.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use nalgebra_sparse::CsrMatrix;

use crate::error::{Error, Result};
use crate::mesh::{DoubleCover, MeshConnectivity};

pub fn read_text(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#') && !l.starts_with('%'))
}

fn parse_field<T: std::str::FromStr>(token: Option<&str>, line: usize, what: &str) -> Result<T> {
    let token = token.ok_or_else(|| Error::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what} {token:?}"),
    })
}

pub fn write_edge_values(mesh: &MeshConnectivity, values: &[f64]) -> Result<String> {
    if values.len() != mesh.edge_count() {
        return Err(Error::LengthMismatch {
            expected: mesh.edge_count(),
            got: values.len(),
        });
    }
    let mut out = String::new();
    for (&[a, b], &v) in mesh.edges().iter().zip(values) {
        writeln!(out, "{} {} {}", a + 1, b + 1, format_real(v)).unwrap();
    }
    Ok(out)
}

/// Raw `(0-based endpoints, value)` records of an edge file.
pub fn parse_edge_file(text: &str) -> Result<Vec<([usize; 2], f64)>> {
    data_lines(text)
        .map(|(line, l)| {
            let mut tokens = l.split_whitespace();
            let a: usize = parse_field(tokens.next(), line, "vertex id")?;
            let b: usize = parse_field(tokens.next(), line, "vertex id")?;
            let v: f64 = parse_field(tokens.next(), line, "value")?;
            if a == 0 || b == 0 {
                return Err(Error::Parse {
                    line,
                    message: "vertex ids are 1-based".into(),
                });
            }
            Ok(([a - 1, b - 1], v))
        })
        .collect()
}

/// Edge values checked against the mesh's canonical edge order.
pub fn parse_edge_values(mesh: &MeshConnectivity, text: &str) -> Result<Vec<f64>> {
    let records = parse_edge_file(text)?;
    if records.len() != mesh.edge_count() {
        return Err(Error::LengthMismatch {
            expected: mesh.edge_count(),
            got: records.len(),
        });
    }
    records
        .into_iter()
        .zip(mesh.edges())
        .enumerate()
        .map(|(edge, (([a, b], v), &[ea, eb]))| {
            if (a.min(b), a.max(b)) == (ea, eb) {
                Ok(v)
            } else {
                Err(Error::EdgeOrderMismatch {
                    edge,
                    a: a + 1,
                    b: b + 1,
                    expected_a: ea + 1,
                    expected_b: eb + 1,
                })
            }
        })
        .collect()
}

pub fn write_matrix_market(matrix: &CsrMatrix<f64>) -> String {
    let entries: Vec<(usize, usize, f64)> = matrix
        .triplet_iter()
        .filter(|(i, j, _)| j <= i)
        .map(|(i, j, v)| (i, j, *v))
        .collect();
    let mut out = String::from("%%MatrixMarket matrix coordinate real symmetric\n");
    writeln!(
        out,
        "{} {} {}",
        matrix.nrows(),
        matrix.ncols(),
        entries.len()
    )
    .unwrap();
    for (i, j, v) in entries {
        writeln!(out, "{} {} {}", i + 1, j + 1, format_real(v)).unwrap();
    }
    out
}

/// Reads a symmetric coordinate Matrix Market file into a dense matrix.
pub fn parse_matrix_market(text: &str) -> Result<DMatrix<f64>> {
    let mut lines = data_lines(text);
    let (line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing size line".into(),
    })?;
    let mut tokens = header.split_whitespace();
    let rows: usize = parse_field(tokens.next(), line, "row count")?;
    let cols: usize = parse_field(tokens.next(), line, "column count")?;
    let mut dense = DMatrix::zeros(rows, cols);
    for (line, l) in lines {
        let mut tokens = l.split_whitespace();
        let i: usize = parse_field(tokens.next(), line, "row index")?;
        let j: usize = parse_field(tokens.next(), line, "column index")?;
        let v: f64 = parse_field(tokens.next(), line, "value")?;
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(Error::Parse {
                line,
                message: format!("index ({i}, {j}) out of range"),
            });
        }
        dense[(i - 1, j - 1)] = v;
        dense[(j - 1, i - 1)] = v;
    }
    Ok(dense)
}

pub fn write_dense_matrix(t: f64, matrix: &DMatrix<f64>) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", matrix.nrows(), format_real(t)).unwrap();
    for row in matrix.row_iter() {
        let cells: Vec<String> = row.iter().map(|&v| format_real(v)).collect();
        writeln!(out, "{}", cells.join(" ")).unwrap();
    }
    out
}

/// Inverse of [`write_dense_matrix`]: returns `(t, K)`.
pub fn parse_dense_matrix(text: &str) -> Result<(f64, DMatrix<f64>)> {
    let mut lines = data_lines(text);
    let (line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header".into(),
    })?;
    let mut tokens = header.split_whitespace();
    let n: usize = parse_field(tokens.next(), line, "dimension")?;
    let t: f64 = parse_field(tokens.next(), line, "time")?;
    let mut values = Vec::with_capacity(n * n);
    for (line, l) in lines {
        let row = l
            .split_whitespace()
            .map(|tok| parse_field(Some(tok), line, "entry"))
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != n {
            return Err(Error::Parse {
                line,
                message: format!("expected {n} entries, got {}", row.len()),
            });
        }
        values.extend(row);
    }
    if values.len() != n * n {
        return Err(Error::LengthMismatch {
            expected: n * n,
            got: values.len(),
        });
    }
    Ok((t, DMatrix::from_row_slice(n, n, &values)))
}

pub fn write_correspondence(cover: &DoubleCover) -> String {
    let mut out = String::new();
    for (k, covers) in cover.edge_correspondence.iter().enumerate() {
        let ids: Vec<String> = covers.iter().map(|c| (c + 1).to_string()).collect();
        writeln!(out, "{} {}", k + 1, ids.join(" ")).unwrap();
    }
    out
}
