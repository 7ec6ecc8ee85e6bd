//! Gauss-map winding around vertices and flat-point detection.

use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;

use nalgebra::{Rotation3, Unit};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curvature::{angle_deficit_K, vertex_normals};
use crate::topology::{ring_distances, vertex_neighbours, vertex_triangles, EdgeKey};
use crate::{GeometryError, PeriodicMesh, Vec3};

/// Residual above which a winding estimate moves to a wider ring.
pub const ROUNDING_LIMIT: f64 = 0.2;
/// Rings tried beyond the requested one before giving up.
pub const MAX_ESCALATION: usize = 3;
/// Clustering radius, in rings, around an accepted flat point.
pub const CLUSTER_RINGS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Winding {
    /// Absolute winding of the ring's Gauss image around the centre's image.
    pub winding: u32,
    /// Signed turning in turns, before rounding.
    pub turns: f64,
    /// Distance of `turns` to the nearest integer.
    pub residual: f64,
    /// Ring radius actually used.
    pub ring_radius: usize,
    /// The image collapsed onto the centre (normals all parallel).
    pub degenerate: bool,
}

/// Shared lookups for repeated winding queries on one mesh.
pub struct GaussMap<'a> {
    pm: &'a PeriodicMesh,
    adj: Vec<Vec<usize>>,
    tris: Vec<Vec<usize>>,
    normals: Vec<Vec3>,
}

impl<'a> GaussMap<'a> {
    pub fn new(pm: &'a PeriodicMesh) -> Self {
        Self {
            pm,
            adj: vertex_neighbours(pm),
            tris: vertex_triangles(pm),
            normals: vertex_normals(pm),
        }
    }

    pub fn normals(&self) -> &[Vec3] {
        &self.normals
    }

    pub fn neighbours(&self) -> &[Vec<usize>] {
        &self.adj
    }

    /// Boundary loop of the union of triangles touching vertices closer than
    /// `radius` to `center`, in triangle orientation.
    pub fn ring_loop(&self, center: usize, radius: usize) -> Result<Vec<usize>, GeometryError> {
        Ok(self.ring_with_faces(center, radius)?.into_iter().map(|(v, _)| v).collect())
    }

    /// Ring loop paired with the inner triangle on each outgoing edge.
    fn ring_with_faces(&self, center: usize, radius: usize) -> Result<Vec<(usize, usize)>, GeometryError> {
        let radius = radius.max(1);
        let dist = ring_distances(&self.adj, center, radius);
        let mut disk: HashSet<usize> = HashSet::new();
        for (&v, &d) in &dist {
            if d < radius {
                disk.extend(self.tris[v].iter().copied());
            }
        }
        let mut count: HashMap<EdgeKey, usize> = HashMap::new();
        let mut directed = Vec::new();
        for &t in &disk {
            let tri = self.pm.mesh.triangles[t];
            for k in 0..3 {
                let (u, v) = (tri[k], tri[(k + 1) % 3]);
                let (key, _) = EdgeKey::directed(u, self.pm.offset(t, k), v, self.pm.offset(t, (k + 1) % 3));
                *count.entry(key).or_default() += 1;
                directed.push((key, u, v, t));
            }
        }
        let mut next: HashMap<usize, (usize, usize)> = HashMap::new();
        for (key, u, v, t) in directed {
            if count[&key] == 1 && next.insert(u, (v, t)).is_some() {
                return Err(GeometryError::NoRing { vertex: center, radius });
            }
        }
        let Some(&start) = next.keys().min() else {
            return Err(GeometryError::NoRing { vertex: center, radius });
        };
        let mut ring = vec![(start, next[&start].1)];
        let mut cur = next[&start].0;
        while cur != start {
            let &(to, face) = next.get(&cur).ok_or(GeometryError::NoRing { vertex: center, radius })?;
            ring.push((cur, face));
            cur = to;
            if ring.len() > next.len() {
                return Err(GeometryError::NoRing { vertex: center, radius });
            }
        }
        if ring.len() != next.len() {
            return Err(GeometryError::NoRing { vertex: center, radius });
        }
        Ok(ring)
    }

    fn turns_at(&self, center: usize, radius: usize) -> Result<Winding, GeometryError> {
        let ring = self.ring_with_faces(center, radius)?;
        let to_pole = pole_rotation(&self.normals[center]);
        let project = |n: Vec3| {
            let m = to_pole * n;
            Complex64::new(m.x, m.y) / (1.0 + m.z).max(1e-300)
        };
        // Face normals between vertex normals halve the angular steps.
        let image: Vec<Complex64> = ring
            .iter()
            .flat_map(|&(v, t)| [project(self.normals[v]), project(self.pm.triangle_normal(t).normalize())])
            .collect();
        let spread = image.iter().map(|p| p.norm()).fold(0.0, f64::max);
        if spread < 1e-9 {
            return Ok(Winding {
                winding: 0,
                turns: 0.0,
                residual: 0.0,
                ring_radius: radius,
                degenerate: true,
            });
        }
        let mut total = 0.0;
        for k in 0..image.len() {
            let (p, q) = (image[k], image[(k + 1) % image.len()]);
            total += (q / p).arg();
        }
        let turns = total / (2.0 * PI);
        Ok(Winding {
            winding: turns.round().abs() as u32,
            turns,
            residual: (turns - turns.round()).abs(),
            ring_radius: radius,
            degenerate: false,
        })
    }

    /// Winding at `radius`, widening the ring while the rounding residual
    /// exceeds [`ROUNDING_LIMIT`].
    pub fn winding(&self, center: usize, radius: usize) -> Result<Winding, GeometryError> {
        if center >= self.pm.vertex_count() {
            return Err(GeometryError::VertexIndex(center));
        }
        let radius = radius.max(1);
        let mut w = self.turns_at(center, radius)?;
        for r in radius + 1..=radius + MAX_ESCALATION {
            if w.degenerate || w.residual <= ROUNDING_LIMIT {
                break;
            }
            match self.turns_at(center, r) {
                Ok(next) => w = next,
                Err(_) => break,
            }
        }
        Ok(w)
    }
}

/// Rotation taking `n` to +z.
fn pole_rotation(n: &Vec3) -> Rotation3<f64> {
    let z = Vec3::z();
    Rotation3::rotation_between(n, &z).unwrap_or_else(|| Rotation3::from_axis_angle(&Unit::new_normalize(Vec3::x()), PI))
}

/// Winding number of the Gauss map around `vertex`, measured on the ring at
/// combinatorial distance `ring_radius`.
pub fn winding_number(pm: &PeriodicMesh, vertex: usize, ring_radius: usize) -> Result<Winding, GeometryError> {
    GaussMap::new(pm).winding(vertex, ring_radius)
}

/// Parameter-plane point whose Gauss image is `n`, for the normal
/// `(2 Re xi, 2 Im xi, |xi|^2 - 1) / (|xi|^2 + 1)`.
pub fn stereographic(n: &Vec3) -> Complex64 {
    Complex64::new(n.x, n.y) / (1.0 - n.z)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatPoint {
    pub vertex: usize,
    pub position: [f64; 3],
    pub normal: [f64; 3],
    /// Stereographic coordinate of the normal, as (re, im).
    pub xi: [f64; 2],
    pub winding: u32,
    pub ring_radius: usize,
}

/// Default curvature threshold: the 10th percentile of |K|.
pub fn default_flat_eps(k: &[f64]) -> f64 {
    let mut abs: Vec<f64> = k.iter().map(|x| x.abs()).filter(|x| x.is_finite()).collect();
    if abs.is_empty() {
        return 0.0;
    }
    abs.sort_by(f64::total_cmp);
    abs[(abs.len() - 1) / 10]
}

/// Vertices with |K| below `eps` whose Gauss map winds twice on rings 2 and
/// 3 (or wider after escalation), one per cluster of radius [`CLUSTER_RINGS`].
pub fn find_flat_points(pm: &PeriodicMesh, eps: Option<f64>) -> Result<Vec<FlatPoint>, GeometryError> {
    let k = angle_deficit_K(pm)?;
    let eps = eps.unwrap_or_else(|| default_flat_eps(&k));
    let gauss = GaussMap::new(pm);
    let mut candidates: Vec<usize> = (0..k.len()).filter(|&v| k[v].abs() <= eps).collect();
    candidates.sort_by(|&a, &b| k[a].abs().total_cmp(&k[b].abs()));
    let mut claimed: HashSet<usize> = HashSet::new();
    let mut out = Vec::new();
    for v in candidates {
        if claimed.contains(&v) {
            continue;
        }
        let Ok(w) = gauss.winding(v, 2) else { continue };
        if w.degenerate || w.winding != 2 {
            continue;
        }
        // Confirm on the next wider ring.
        match gauss.turns_at(v, w.ring_radius + 1) {
            Ok(wider) if !wider.degenerate && wider.winding == 2 => {}
            _ => continue,
        }
        claimed.extend(ring_distances(gauss.neighbours(), v, CLUSTER_RINGS).into_keys());
        let n = gauss.normals()[v];
        let xi = stereographic(&n);
        let p = pm.mesh.vertices[v];
        out.push(FlatPoint {
            vertex: v,
            position: [p.x, p.y, p.z],
            normal: [n.x, n.y, n.z],
            xi: [xi.re, xi.im],
            winding: w.winding,
            ring_radius: w.ring_radius,
        });
    }
    Ok(out)
}

pub fn write_flat_points_json<W: std::io::Write>(w: W, points: &[FlatPoint]) -> Result<(), GeometryError> {
    serde_json::to_writer_pretty(w, points)?;
    Ok(())
}
