//! OBJ and PLY export, OBJ import.
//!
//! Periodic meshes are written unwrapped, with the lattice in a
//! `# lattice ax ay az bx by bz cx cy cz` comment; reading welds the copies
//! back together.

use std::io::{BufRead, Write};

use crate::weld::{unwrap, weld_periodic};
use crate::{GeometryError, Lattice, PeriodicMesh, TriMesh, Vec3};

pub fn write_obj<W: Write>(mut w: W, pm: &PeriodicMesh, comments: &[String]) -> Result<(), GeometryError> {
    for c in comments {
        for line in c.lines() {
            writeln!(w, "# {line}")?;
        }
    }
    if let Some(l) = &pm.lattice {
        let v = l.vectors;
        writeln!(
            w,
            "# lattice {} {} {} {} {} {} {} {} {}",
            v[0].x, v[0].y, v[0].z, v[1].x, v[1].y, v[1].z, v[2].x, v[2].y, v[2].z
        )?;
    }
    let (flat, _) = unwrap(pm);
    for p in &flat.vertices {
        writeln!(w, "v {} {} {}", p.x, p.y, p.z)?;
    }
    for t in &flat.triangles {
        writeln!(w, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    Ok(())
}

/// Weld tolerance used when reading, relative to the longest lattice vector.
pub const READ_WELD_REL: f64 = 1e-7;

pub fn read_obj<R: BufRead>(r: R) -> Result<PeriodicMesh, GeometryError> {
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    let mut lattice = None;
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        let err = |msg: String| GeometryError::Parse { line: line_no, msg };
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("#") => {
                if parts.next() == Some("lattice") {
                    let nums: Vec<f64> = parts
                        .map(|s| s.parse::<f64>().map_err(|e| err(format!("lattice: {e}"))))
                        .collect::<Result<_, _>>()?;
                    if nums.len() != 9 {
                        return Err(err(format!("lattice needs 9 numbers, got {}", nums.len())));
                    }
                    let v = |k: usize| Vec3::new(nums[3 * k], nums[3 * k + 1], nums[3 * k + 2]);
                    lattice = Some(Lattice::new([v(0), v(1), v(2)]).map_err(|e| err(e.to_string()))?);
                }
            }
            Some("v") => {
                let nums: Vec<f64> = parts
                    .take(3)
                    .map(|s| s.parse::<f64>().map_err(|e| err(format!("vertex: {e}"))))
                    .collect::<Result<_, _>>()?;
                if nums.len() != 3 || nums.iter().any(|x| !x.is_finite()) {
                    return Err(err("vertex needs 3 finite coordinates".into()));
                }
                vertices.push(Vec3::new(nums[0], nums[1], nums[2]));
            }
            Some("f") => {
                let idx: Vec<usize> = parts
                    .map(|s| {
                        let first = s.split('/').next().unwrap_or("");
                        let k: i64 = first.parse().map_err(|e| err(format!("face index {s:?}: {e}")))?;
                        let n = vertices.len() as i64;
                        let k = if k < 0 { n + k } else { k - 1 };
                        if k < 0 || k >= n {
                            return Err(err(format!("face index {s} out of range")));
                        }
                        Ok(k as usize)
                    })
                    .collect::<Result<_, _>>()?;
                if idx.len() < 3 {
                    return Err(err("face needs at least 3 vertices".into()));
                }
                for k in 1..idx.len() - 1 {
                    triangles.push([idx[0], idx[k], idx[k + 1]]);
                }
            }
            _ => {}
        }
    }
    if triangles.is_empty() {
        return Err(GeometryError::Parse {
            line: 0,
            msg: "no faces".into(),
        });
    }
    let mesh = TriMesh::new(vertices, triangles);
    Ok(match lattice {
        Some(l) => {
            let scale = l.vectors.iter().map(|v| v.norm()).fold(0.0, f64::max);
            weld_periodic(&mesh, &l, READ_WELD_REL * scale).mesh
        }
        None => PeriodicMesh::closed(mesh),
    })
}

/// Binary little-endian PLY with a per-vertex float `quality` property.
pub fn write_ply<W: Write>(mut w: W, pm: &PeriodicMesh, quality: &[f64], comment: &str) -> Result<(), GeometryError> {
    let (flat, source) = unwrap(pm);
    writeln!(w, "ply")?;
    writeln!(w, "format binary_little_endian 1.0")?;
    for line in comment.lines() {
        writeln!(w, "comment {line}")?;
    }
    writeln!(w, "element vertex {}", flat.vertices.len())?;
    for p in ["x", "y", "z", "quality"] {
        writeln!(w, "property float {p}")?;
    }
    writeln!(w, "element face {}", flat.triangles.len())?;
    writeln!(w, "property list uchar int vertex_indices")?;
    writeln!(w, "end_header")?;
    for (p, &s) in flat.vertices.iter().zip(&source) {
        let q = quality.get(s).copied().unwrap_or(0.0);
        for x in [p.x, p.y, p.z, q] {
            w.write_all(&(x as f32).to_le_bytes())?;
        }
    }
    for t in &flat.triangles {
        w.write_all(&[3u8])?;
        for &i in t {
            w.write_all(&(i as i32).to_le_bytes())?;
        }
    }
    Ok(())
}
