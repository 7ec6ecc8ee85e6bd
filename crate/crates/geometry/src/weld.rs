//! Merging vertices that coincide modulo a lattice.

use std::collections::HashMap;

use crate::{Lattice, PeriodicMesh, TriMesh, Vec3};

#[derive(Debug, Clone)]
pub struct Welded {
    pub mesh: PeriodicMesh,
    /// Output vertex for each input vertex.
    pub map: Vec<usize>,
    /// Largest distance between merged copies.
    pub max_gap: f64,
}

/// Merges vertices of `mesh` closer than `tol` modulo `lattice` and records
/// per-corner offsets so that every triangle keeps its input geometry.
/// Triangles that collapse onto fewer than three vertices are dropped.
pub fn weld_periodic(mesh: &TriMesh, lattice: &Lattice, tol: f64) -> Welded {
    let inv = lattice.matrix().try_inverse().unwrap_or_else(nalgebra::Matrix3::identity);
    let h = (2.0 * tol * inv.norm()).max(1e-12);
    let cells = ((1.0 / h).floor() as i64).clamp(1, 1 << 20);
    let cell_of = |p: &Vec3| -> [i64; 3] {
        let f = inv * p;
        [f.x, f.y, f.z].map(|x| ((x - x.floor()) * cells as f64).floor() as i64 % cells)
    };

    let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    let mut reps: Vec<Vec3> = Vec::new();
    let mut map = Vec::with_capacity(mesh.vertices.len());
    let mut shift = Vec::with_capacity(mesh.vertices.len());
    let mut max_gap: f64 = 0.0;
    for p in &mesh.vertices {
        let c = cell_of(p);
        let mut found = None;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let key = [
                        (c[0] + dx).rem_euclid(cells),
                        (c[1] + dy).rem_euclid(cells),
                        (c[2] + dz).rem_euclid(cells),
                    ];
                    if let Some(list) = grid.get(&key) {
                        for &r in list {
                            let (o, d) = lattice.nearest_vector(&(p - reps[r]));
                            if d <= tol {
                                found = Some((r, o, d));
                                break 'search;
                            }
                        }
                    }
                }
            }
        }
        match found {
            Some((r, o, d)) => {
                max_gap = max_gap.max(d);
                map.push(r);
                shift.push(o);
            }
            None => {
                grid.entry(c).or_default().push(reps.len());
                map.push(reps.len());
                shift.push([0; 3]);
                reps.push(*p);
            }
        }
    }

    let mut triangles = Vec::with_capacity(mesh.triangles.len());
    let mut offsets = Vec::with_capacity(mesh.triangles.len());
    for tri in &mesh.triangles {
        let t = tri.map(|v| map[v]);
        if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            // Only degenerate if the copies are the same point too.
            let o = tri.map(|v| shift[v]);
            if (t[0] == t[1] && o[0] == o[1]) || (t[1] == t[2] && o[1] == o[2]) || (t[0] == t[2] && o[0] == o[2]) {
                continue;
            }
        }
        triangles.push(t);
        offsets.push(tri.map(|v| shift[v]));
    }
    let params = mesh.vertex_params.as_ref().map(|ps| {
        let mut out = vec![num_complex::Complex64::new(0.0, 0.0); reps.len()];
        for (i, &m) in map.iter().enumerate().rev() {
            out[m] = ps[i];
        }
        out
    });
    let mut out = TriMesh::new(reps, triangles);
    out.vertex_params = params;
    let mut pm = PeriodicMesh::periodic(out, *lattice, offsets);
    pm.normalise_offsets();
    Welded { mesh: pm, map, max_gap }
}

/// Splits seam vertices so every triangle uses stored positions directly.
/// Returns the unwrapped mesh and, per output vertex, the source vertex.
pub fn unwrap(pm: &PeriodicMesh) -> (TriMesh, Vec<usize>) {
    let mut vertices = pm.mesh.vertices.clone();
    let mut source: Vec<usize> = (0..vertices.len()).collect();
    let mut copies: HashMap<(usize, [i32; 3]), usize> = HashMap::new();
    let mut triangles = Vec::with_capacity(pm.triangle_count());
    for (t, tri) in pm.mesh.triangles.iter().enumerate() {
        let mut out = [0; 3];
        for k in 0..3 {
            let o = pm.offset(t, k);
            out[k] = if o == [0; 3] {
                tri[k]
            } else {
                *copies.entry((tri[k], o)).or_insert_with(|| {
                    vertices.push(pm.corner(t, k));
                    source.push(tri[k]);
                    vertices.len() - 1
                })
            };
        }
        triangles.push(out);
    }
    (TriMesh::new(vertices, triangles), source)
}
