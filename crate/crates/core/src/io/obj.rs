use std::io::{BufRead, BufReader, Read, Write};

use nalgebra::Vector3;

use super::fmt_num;
use crate::mesh::Mesh;
use crate::{Error, Result};

/// Writes vertices and triangles (1-based) in Wavefront OBJ form.
pub fn write_obj<W: Write>(mut w: W, mesh: &Mesh, name: &str) -> Result<()> {
    writeln!(w, "# {name}: {} x {} grid", mesh.nu(), mesh.nv())?;
    writeln!(w, "o {name}")?;
    for p in &mesh.vertices {
        writeln!(w, "v {} {} {}", fmt_num(p.x), fmt_num(p.y), fmt_num(p.z))?;
    }
    for t in &mesh.triangles {
        writeln!(w, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    w.flush()?;
    Ok(())
}

/// Vertices and zero-based triangles.
pub type ObjData = (Vec<Vector3<f64>>, Vec<[usize; 3]>);

/// Reads `v` and triangular `f` records; other records are skipped.
/// Returned face indices are zero-based.
pub fn read_obj<R: Read>(r: R) -> Result<ObjData> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for (idx, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        let n = idx + 1;
        let err = |msg: String| Error::Format { line: n, msg };
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("v") => {
                let xs = parts
                    .map(|t| t.parse::<f64>().map_err(|_| err(format!("bad coordinate `{t}`"))))
                    .collect::<Result<Vec<_>>>()?;
                if xs.len() != 3 {
                    return Err(err(format!("expected 3 coordinates, found {}", xs.len())));
                }
                vertices.push(Vector3::new(xs[0], xs[1], xs[2]));
            }
            Some("f") => {
                let ids = parts
                    .map(|t| {
                        // accept `i`, `i/t` and `i/t/n`
                        let head = t.split('/').next().unwrap_or(t);
                        head.parse::<usize>()
                            .ok()
                            .filter(|&i| i >= 1)
                            .ok_or_else(|| err(format!("bad vertex index `{t}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if ids.len() != 3 {
                    return Err(err(format!("expected a triangle, found {} indices", ids.len())));
                }
                faces.push([ids[0] - 1, ids[1] - 1, ids[2] - 1]);
            }
            _ => {}
        }
    }
    if let Some(bad) = faces.iter().flatten().find(|&&i| i >= vertices.len()) {
        return Err(Error::Format {
            line: 0,
            msg: format!("face references vertex {} of {}", bad + 1, vertices.len()),
        });
    }
    Ok((vertices, faces))
}
