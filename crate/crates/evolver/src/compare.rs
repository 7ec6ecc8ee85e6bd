//! Distances between two periodic meshes in the same lattice.

use nalgebra::Matrix3;
use serde::Serialize;
use tpms_geometry::{mean_edge_length, Lattice, PeriodicMesh, Vec3};

use crate::EvolverError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceReport {
    /// RMS over the vertices of both meshes, each measured to the other surface.
    pub rms: f64,
    pub hausdorff: f64,
    pub rms_ab: f64,
    pub rms_ba: f64,
    pub hausdorff_ab: f64,
    pub hausdorff_ba: f64,
}

/// Closest point of the triangle `abc` to `p`.
pub fn closest_point_on_triangle(p: &Vec3, a: &Vec3, b: &Vec3, c: &Vec3) -> Vec3 {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return *a;
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return *b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return a + ab * (d1 / (d1 - d3));
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return *c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return a + ac * (d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0 {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let denom = 1.0 / (va + vb + vc);
    a + ab * (vb * denom) + ac * (vc * denom)
}

/// Triangles of a periodic mesh bucketed on a grid over the unit cell.
/// Each entry carries the lattice shift that brings the triangle into the
/// bucket's home copy.
struct TriangleGrid<'a> {
    pm: &'a PeriodicMesh,
    lattice: Lattice,
    dims: [i64; 3],
    buckets: Vec<Vec<(usize, [i32; 3])>>,
    /// Smallest perpendicular width of a bucket.
    width: f64,
}

impl<'a> TriangleGrid<'a> {
    fn new(pm: &'a PeriodicMesh, lattice: Lattice) -> Self {
        let v = lattice.vectors;
        let volume = lattice.volume().abs();
        let heights = [
            volume / v[1].cross(&v[2]).norm(),
            volume / v[2].cross(&v[0]).norm(),
            volume / v[0].cross(&v[1]).norm(),
        ];
        let cell = 2.0 * mean_edge_length(pm);
        let dims = heights.map(|h| ((h / cell).floor() as i64).clamp(1, 64));
        let width = (0..3).map(|i| heights[i] / dims[i] as f64).fold(f64::INFINITY, f64::min);
        let index = |i: [i64; 3]| ((i[0] * dims[1] + i[1]) * dims[2] + i[2]) as usize;
        let mut buckets = vec![Vec::new(); (dims[0] * dims[1] * dims[2]) as usize];
        for t in 0..pm.triangle_count() {
            let fr = pm.triangle_points(t).map(|p| lattice.to_fractional(&p));
            let mut lo = [0i64; 3];
            let mut hi = [0i64; 3];
            for k in 0..3 {
                let (a, b) = fr.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), f| (a.min(f[k]), b.max(f[k])));
                lo[k] = (a * dims[k] as f64).floor() as i64;
                hi[k] = (b * dims[k] as f64).floor() as i64;
            }
            for i in lo[0]..=hi[0] {
                for j in lo[1]..=hi[1] {
                    for k in lo[2]..=hi[2] {
                        let g = [i, j, k];
                        let home = [0, 1, 2].map(|a| g[a].rem_euclid(dims[a]));
                        let shift = [0, 1, 2].map(|a| -(g[a].div_euclid(dims[a])) as i32);
                        buckets[index(home)].push((t, shift));
                    }
                }
            }
        }
        Self {
            pm,
            lattice,
            dims,
            buckets,
            width,
        }
    }

    fn index(&self, i: [i64; 3]) -> usize {
        ((i[0] * self.dims[1] + i[1]) * self.dims[2] + i[2]) as usize
    }

    /// Distance from `p` to the periodic surface.
    fn distance(&self, p: &Vec3) -> f64 {
        let (home, _) = self.lattice.wrap(p);
        let f = self.lattice.to_fractional(&home);
        let b = [0, 1, 2].map(|a| ((f[a] * self.dims[a] as f64).floor() as i64).clamp(0, self.dims[a] - 1));
        let mut best = f64::INFINITY;
        let mut r: i64 = 0;
        loop {
            for i in -r..=r {
                for j in -r..=r {
                    for k in -r..=r {
                        if i.abs().max(j.abs()).max(k.abs()) != r {
                            continue;
                        }
                        let g = [b[0] + i, b[1] + j, b[2] + k];
                        let cell = [0, 1, 2].map(|a| g[a].rem_euclid(self.dims[a]));
                        let wrap = [0, 1, 2].map(|a| g[a].div_euclid(self.dims[a]) as i32);
                        for &(t, shift) in &self.buckets[self.index(cell)] {
                            let s = self.lattice.translation([shift[0] + wrap[0], shift[1] + wrap[1], shift[2] + wrap[2]]);
                            let [x, y, z] = self.pm.triangle_points(t).map(|q| q + s);
                            best = best.min((closest_point_on_triangle(&home, &x, &y, &z) - home).norm());
                        }
                    }
                }
            }
            if best <= r as f64 * self.width {
                return best;
            }
            r += 1;
        }
    }
}

fn lattice_of(pm: &PeriodicMesh) -> Result<Lattice, EvolverError> {
    pm.lattice.ok_or(EvolverError::NotPeriodic)
}

fn lattice_gap(a: &Lattice, b: &Lattice) -> f64 {
    (0..3).map(|i| (a.vectors[i] - b.vectors[i]).norm()).fold(0.0, f64::max)
}

fn one_sided(from: &PeriodicMesh, to: &TriangleGrid) -> (f64, f64, usize) {
    use rayon::prelude::*;
    let d: Vec<f64> = from.mesh.vertices.par_iter().map(|p| to.distance(p)).collect();
    let sq: f64 = d.iter().map(|x| x * x).sum();
    (sq, d.iter().copied().fold(0.0, f64::max), d.len())
}

/// Symmetric vertex-to-surface distances, modulo lattice translations.
pub fn compare_surfaces(a: &PeriodicMesh, b: &PeriodicMesh) -> Result<DistanceReport, EvolverError> {
    let la = lattice_of(a)?;
    let lb = lattice_of(b)?;
    let scale = la.vectors.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let gap = lattice_gap(&la, &lb);
    if gap > 1e-9 * scale {
        return Err(EvolverError::LatticeMismatch(gap));
    }
    let (sa, ha, na) = one_sided(a, &TriangleGrid::new(b, lb));
    let (sb, hb, nb) = one_sided(b, &TriangleGrid::new(a, la));
    Ok(DistanceReport {
        rms: ((sa + sb) / (na + nb) as f64).sqrt(),
        hausdorff: ha.max(hb),
        rms_ab: (sa / na as f64).sqrt(),
        rms_ba: (sb / nb as f64).sqrt(),
        hausdorff_ab: ha,
        hausdorff_ba: hb,
    })
}

/// Carries the mesh into `target` by the linear map taking its lattice
/// vectors onto the target's.
pub fn fit_to_lattice(pm: &PeriodicMesh, target: &Lattice) -> Result<PeriodicMesh, EvolverError> {
    let source = lattice_of(pm)?;
    let inv = source.matrix().try_inverse().ok_or(EvolverError::DegenerateCell(source.volume()))?;
    let map: Matrix3<f64> = target.matrix() * inv;
    let mut out = pm.clone();
    for v in out.mesh.vertices.iter_mut() {
        *v = map * *v;
    }
    out.lattice = Some(*target);
    Ok(out)
}

/// Translates every vertex by `shift`.
pub fn translated(pm: &PeriodicMesh, shift: &Vec3) -> PeriodicMesh {
    let mut out = pm.clone();
    for v in out.mesh.vertices.iter_mut() {
        *v += shift;
    }
    out
}
