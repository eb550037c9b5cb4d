//! Minimal Wavefront OBJ reader and writer (`v` and `f` records only).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{MeshConnectivity, VertexPositions};
use crate::error::{Error, Result};

/// Reads an OBJ file with triangular faces.
pub fn load_obj(path: impl AsRef<Path>) -> Result<(MeshConnectivity, VertexPositions)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_obj(&text)
}

/// Parses OBJ text. Record types other than `v` and `f` are skipped, and
/// face entries of the form `i/t/n` use only the part before the first slash.
/// Negative (relative) indices are resolved against the vertices seen so far.
pub fn parse_obj(text: &str) -> Result<(MeshConnectivity, VertexPositions)> {
    let mut positions = Vec::new();
    let mut faces = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = content.split_whitespace();
        match tokens.next() {
            Some("v") => {
                let mut xyz = [0.0; 3];
                for slot in &mut xyz {
                    let token = tokens.next().ok_or_else(|| Error::Parse {
                        line,
                        message: "vertex record needs three coordinates".into(),
                    })?;
                    *slot = token.parse().map_err(|_| Error::Parse {
                        line,
                        message: format!("invalid coordinate {token:?}"),
                    })?;
                }
                positions.push(xyz);
            }
            Some("f") => {
                let face_index = faces.len();
                let corners = tokens
                    .map(|token| resolve_index(token, positions.len(), line))
                    .collect::<Result<Vec<_>>>()?;
                if corners.len() != 3 {
                    return Err(Error::NonTriangularFace {
                        face: face_index,
                        corners: corners.len(),
                    });
                }
                faces.push([corners[0], corners[1], corners[2]]);
            }
            _ => {}
        }
    }

    let mesh = MeshConnectivity::from_faces(positions.len(), faces)?;
    Ok((mesh, VertexPositions(positions)))
}

fn resolve_index(token: &str, seen: usize, line: usize) -> Result<usize> {
    let head = token.split('/').next().unwrap_or(token);
    let value: i64 = head.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid face index {token:?}"),
    })?;
    let resolved = match value {
        v if v > 0 => v - 1,
        v if v < 0 => seen as i64 + v,
        _ => {
            return Err(Error::Parse {
                line,
                message: "face index 0 is not valid in OBJ".into(),
            })
        }
    };
    if resolved < 0 {
        return Err(Error::Parse {
            line,
            message: format!("relative index {value} points before the first vertex"),
        });
    }
    Ok(resolved as usize)
}

/// Serializes a mesh as OBJ text with 17 significant digits per coordinate.
pub fn write_obj(mesh: &MeshConnectivity, positions: &VertexPositions) -> Result<String> {
    if positions.len() != mesh.vertex_count() {
        return Err(Error::LengthMismatch {
            expected: mesh.vertex_count(),
            got: positions.len(),
        });
    }
    let mut out = String::new();
    for p in positions.as_slice() {
        writeln!(out, "v {:.16e} {:.16e} {:.16e}", p[0], p[1], p[2]).unwrap();
    }
    for f in mesh.faces() {
        writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1).unwrap();
    }
    Ok(out)
}
