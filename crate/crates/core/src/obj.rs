//! ASCII OBJ import/export.
//!
//! Only `v x y z` and `f i j k` records are used (1-based indices). Normal
//! and texture fields on faces (`f i/j/k ...`) are accepted and ignored;
//! boundary loops are always re-derived, never stored.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use nalgebra::Point3;

use crate::error::MeshError;
use crate::mesh::TriangleMesh;

pub fn read_obj(reader: impl Read) -> Result<TriangleMesh, MeshError> {
    let mut vertices: Vec<Point3<f64>> = Vec::new();
    let mut faces: Vec<[u32; 3]> = Vec::new();
    for (lineno, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("v") => {
                let mut coords = [0.0f64; 3];
                for c in coords.iter_mut() {
                    let tok = tokens.next().ok_or_else(|| MeshError::ObjParse {
                        line: lineno,
                        message: "vertex needs three coordinates".into(),
                    })?;
                    *c = tok.parse().map_err(|_| MeshError::ObjParse {
                        line: lineno,
                        message: format!("bad coordinate `{tok}`"),
                    })?;
                }
                vertices.push(Point3::new(coords[0], coords[1], coords[2]));
            }
            Some("f") => {
                let mut idx = [0u32; 3];
                for (k, slot) in idx.iter_mut().enumerate() {
                    let tok = tokens.next().ok_or_else(|| MeshError::ObjParse {
                        line: lineno,
                        message: "face needs three vertices (triangles only)".into(),
                    })?;
                    let vert = tok.split('/').next().unwrap_or(tok);
                    let one_based: i64 = vert.parse().map_err(|_| MeshError::ObjParse {
                        line: lineno,
                        message: format!("bad face index `{tok}`"),
                    })?;
                    if one_based < 1 {
                        return Err(MeshError::ObjParse {
                            line: lineno,
                            message: format!("face index {one_based} must be positive"),
                        });
                    }
                    *slot = (one_based - 1) as u32;
                    let _ = k;
                }
                if tokens.next().is_some() {
                    return Err(MeshError::ObjParse {
                        line: lineno,
                        message: "only triangular faces are supported".into(),
                    });
                }
                faces.push(idx);
            }
            // Comments, groups, normals, etc. are ignored.
            _ => {}
        }
    }
    TriangleMesh::new(vertices, faces)
}

pub fn read_obj_file(path: impl AsRef<Path>) -> Result<TriangleMesh, MeshError> {
    read_obj(std::fs::File::open(path)?)
}

/// Write `v`/`f` records. Coordinates use Rust's shortest round-trip float
/// formatting, so a write/read cycle reproduces vertex bits exactly.
pub fn write_obj(mesh: &TriangleMesh, mut writer: impl Write) -> Result<(), MeshError> {
    for p in mesh.vertices() {
        writeln!(writer, "v {} {} {}", p.x, p.y, p.z)?;
    }
    for f in mesh.faces() {
        writeln!(writer, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    Ok(())
}

pub fn write_obj_file(mesh: &TriangleMesh, path: impl AsRef<Path>) -> Result<(), MeshError> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_obj(mesh, &mut file)?;
    Ok(())
}
