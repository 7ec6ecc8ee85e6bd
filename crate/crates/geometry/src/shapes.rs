//! Reference meshes.

use std::collections::HashMap;

use crate::{Lattice, PeriodicMesh, TriMesh, Vec3};

/// Regular icosahedron with unit circumradius, outward oriented.
pub fn icosahedron() -> PeriodicMesh {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut v = Vec::new();
    for s in [-1.0, 1.0] {
        for t in [-1.0, 1.0] {
            v.push(Vec3::new(0.0, s, t * phi));
            v.push(Vec3::new(s, t * phi, 0.0));
            v.push(Vec3::new(t * phi, 0.0, s));
        }
    }
    for p in v.iter_mut() {
        *p /= p.norm();
    }
    let edge = (v[0] - v[1]).norm().min((v[0] - v[2]).norm()).min((v[0] - v[4]).norm());
    let near = |i: usize, j: usize| ((v[i] - v[j]).norm() - edge).abs() < 1e-9;
    let mut tris = Vec::new();
    for i in 0..12 {
        for j in i + 1..12 {
            for k in j + 1..12 {
                if near(i, j) && near(j, k) && near(i, k) {
                    let n = (v[j] - v[i]).cross(&(v[k] - v[i]));
                    tris.push(if n.dot(&v[i]) > 0.0 { [i, j, k] } else { [i, k, j] });
                }
            }
        }
    }
    PeriodicMesh::closed(TriMesh::new(v, tris))
}

/// Icosahedron subdivided `level` times and projected to the unit sphere.
pub fn icosphere(level: usize) -> PeriodicMesh {
    let base = icosahedron().mesh;
    let (mut v, mut tris) = (base.vertices, base.triangles);
    for _ in 0..level {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(tris.len() * 4);
        for t in &tris {
            let mut m = [0; 3];
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                m[k] = *mid.entry(key).or_insert_with(|| {
                    let p = (v[a] + v[b]).normalize();
                    v.push(p);
                    v.len() - 1
                });
            }
            next.push([t[0], m[0], m[2]]);
            next.push([t[1], m[1], m[0]]);
            next.push([t[2], m[2], m[1]]);
            next.push([m[0], m[1], m[2]]);
        }
        tris = next;
    }
    PeriodicMesh::closed(TriMesh::new(v, tris))
}

/// Unit-square flat torus in the z = 0 plane with an `nx` by `ny` grid,
/// lattice vectors along x, y and z.
pub fn flat_torus(nx: usize, ny: usize) -> PeriodicMesh {
    let (nx, ny) = (nx.max(1), ny.max(1));
    let mut v = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            v.push(Vec3::new(i as f64 / nx as f64, j as f64 / ny as f64, 0.0));
        }
    }
    let mut tris = Vec::new();
    let mut offsets = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let corner = |di: usize, dj: usize| {
                let (ii, jj) = (i + di, j + dj);
                let id = (jj % ny) * nx + ii % nx;
                (id, [(ii / nx) as i32, (jj / ny) as i32, 0])
            };
            let (a, b, c, d) = (corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1));
            tris.push([a.0, b.0, c.0]);
            offsets.push([a.1, b.1, c.1]);
            tris.push([a.0, c.0, d.0]);
            offsets.push([a.1, c.1, d.1]);
        }
    }
    let lattice = Lattice {
        vectors: [Vec3::x(), Vec3::y(), Vec3::z()],
    };
    PeriodicMesh::periodic(TriMesh::new(v, tris), lattice, offsets)
}
