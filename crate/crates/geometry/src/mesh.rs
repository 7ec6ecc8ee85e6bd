use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::GeometryError;

pub type Vec3 = Vector3<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryTag {
    #[default]
    Interior,
    Arc,
    Diameter,
}

/// Indexed triangle mesh.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TriMesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[usize; 3]>,
    /// Parameter-plane point each vertex came from, when known. The point at
    /// infinity is stored with infinite components.
    pub vertex_params: Option<Vec<Complex64>>,
    pub boundary_tags: Vec<BoundaryTag>,
}

impl TriMesh {
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Self {
        let n = vertices.len();
        Self {
            vertices,
            triangles,
            vertex_params: None,
            boundary_tags: vec![BoundaryTag::Interior; n],
        }
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|i| self.vertices[i]);
        0.5 * (b - a).cross(&(c - a)).norm()
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }
}

/// Three translation vectors of a 3-torus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub vectors: [Vec3; 3],
}

impl Lattice {
    pub fn new(vectors: [Vec3; 3]) -> Result<Self, GeometryError> {
        let l = Self { vectors };
        let vol = l.volume();
        if !(vol.abs() > 1e-12) {
            return Err(GeometryError::DegenerateLattice(vol));
        }
        Ok(l)
    }

    /// Hexagonal lattice with `a1` along x, `a2` at 120 degrees, `c` along z.
    pub fn hexagonal(a: f64, c: f64) -> Self {
        let s = 3f64.sqrt() / 2.0;
        Self {
            vectors: [
                Vec3::new(a, 0.0, 0.0),
                Vec3::new(-0.5 * a, s * a, 0.0),
                Vec3::new(0.0, 0.0, c),
            ],
        }
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_columns(&self.vectors)
    }

    pub fn volume(&self) -> f64 {
        self.matrix().determinant()
    }

    pub fn to_fractional(&self, p: &Vec3) -> Vec3 {
        self.matrix().try_inverse().map(|m| m * p).unwrap_or_else(Vec3::zeros)
    }

    pub fn to_cartesian(&self, f: &Vec3) -> Vec3 {
        self.matrix() * f
    }

    pub fn translation(&self, offset: [i32; 3]) -> Vec3 {
        self.vectors[0] * offset[0] as f64 + self.vectors[1] * offset[1] as f64 + self.vectors[2] * offset[2] as f64
    }

    /// Nearest lattice vector to `d` in lattice coordinates, and the distance
    /// from `d` to it.
    pub fn nearest_vector(&self, d: &Vec3) -> ([i32; 3], f64) {
        let f = self.to_fractional(d);
        let base = [f.x.round() as i32, f.y.round() as i32, f.z.round() as i32];
        // Rounding fractional coordinates can miss in skewed cells; check
        // the neighbours too.
        let mut best = (base, f64::INFINITY);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let o = [base[0] + dx, base[1] + dy, base[2] + dz];
                    let dist = (d - self.translation(o)).norm();
                    if dist < best.1 {
                        best = (o, dist);
                    }
                }
            }
        }
        best
    }

    /// Wraps `p` into the unit cell; returns the wrapped point and the
    /// lattice offset that was removed.
    pub fn wrap(&self, p: &Vec3) -> (Vec3, [i32; 3]) {
        let f = self.to_fractional(p);
        let o = [f.x.floor() as i32, f.y.floor() as i32, f.z.floor() as i32];
        (p - self.translation(o), o)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            vectors: self.vectors.map(|v| v * s),
        }
    }
}

/// Mesh on a 3-torus.
///
/// Every vertex is stored once. A triangle whose corners sit in different
/// copies of the cell records, per corner, the lattice translation to add to
/// the stored vertex position. Seam identifications follow from these.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicMesh {
    pub mesh: TriMesh,
    pub lattice: Option<Lattice>,
    /// Per-triangle, per-corner lattice offsets; empty means all zero.
    pub offsets: Vec<[[i32; 3]; 3]>,
}

/// A vertex and one of its translated copies that a triangle uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Identification {
    pub vertex: usize,
    pub offset: [i32; 3],
}

impl PeriodicMesh {
    /// A closed mesh in ordinary space.
    pub fn closed(mesh: TriMesh) -> Self {
        Self {
            mesh,
            lattice: None,
            offsets: Vec::new(),
        }
    }

    pub fn periodic(mesh: TriMesh, lattice: Lattice, offsets: Vec<[[i32; 3]; 3]>) -> Self {
        Self {
            mesh,
            lattice: Some(lattice),
            offsets,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.mesh.vertices.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.mesh.triangles.len()
    }

    pub fn offset(&self, t: usize, k: usize) -> [i32; 3] {
        self.offsets.get(t).map(|o| o[k]).unwrap_or([0; 3])
    }

    /// Position of corner `k` of triangle `t`, translated into place.
    pub fn corner(&self, t: usize, k: usize) -> Vec3 {
        let v = self.mesh.vertices[self.mesh.triangles[t][k]];
        match &self.lattice {
            Some(l) => v + l.translation(self.offset(t, k)),
            None => v,
        }
    }

    pub fn triangle_points(&self, t: usize) -> [Vec3; 3] {
        [self.corner(t, 0), self.corner(t, 1), self.corner(t, 2)]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        0.5 * (b - a).cross(&(c - a)).norm()
    }

    /// Unnormalised normal (twice the area, along the oriented normal).
    pub fn triangle_normal(&self, t: usize) -> Vec3 {
        let [a, b, c] = self.triangle_points(t);
        (b - a).cross(&(c - a))
    }

    pub fn area(&self) -> f64 {
        (0..self.triangle_count()).map(|t| self.triangle_area(t)).sum()
    }

    /// Translated vertex copies used by triangles, excluding the stored ones.
    pub fn identifications(&self) -> Vec<Identification> {
        let mut out: Vec<Identification> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (t, tri) in self.mesh.triangles.iter().enumerate() {
            for (k, &v) in tri.iter().enumerate() {
                let offset = self.offset(t, k);
                if offset != [0; 3] && seen.insert((v, offset)) {
                    out.push(Identification { vertex: v, offset });
                }
            }
        }
        out
    }

    /// Re-expresses every triangle relative to its first corner, so that
    /// corner 0 carries no offset. Geometry is unchanged.
    pub fn normalise_offsets(&mut self) {
        for o in self.offsets.iter_mut() {
            let base = o[0];
            for c in o.iter_mut() {
                for i in 0..3 {
                    c[i] -= base[i];
                }
            }
        }
    }

    /// Applies `p -> s p` to positions and lattice.
    pub fn scale(&mut self, s: f64) {
        for v in self.mesh.vertices.iter_mut() {
            *v *= s;
        }
        if let Some(l) = self.lattice.as_mut() {
            *l = l.scaled(s);
        }
    }
}
