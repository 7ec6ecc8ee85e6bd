//! Triangulated parameter domains.

use std::f64::consts::PI;

use num_complex::Complex64;
use tpms_geometry::BoundaryTag;

/// Triangulation of a region of the parameter plane.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamMesh {
    pub points: Vec<Complex64>,
    pub triangles: Vec<[usize; 3]>,
    pub tags: Vec<BoundaryTag>,
}

impl ParamMesh {
    pub fn area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|i| self.points[i]);
                0.5 * ((b - a).conj() * (c - a)).im
            })
            .sum()
    }

    /// Applies `xi -> s xi`.
    pub fn scaled(mut self, s: f64) -> Self {
        for p in self.points.iter_mut() {
            *p *= s;
        }
        self
    }
}

/// Sorted node list on `[lo, hi]`: `n` uniform intervals plus each refine
/// value and points halving the gap towards it three times.
fn graded_nodes(lo: f64, hi: f64, n: usize, refine: &[f64]) -> Vec<f64> {
    let step = (hi - lo) / n as f64;
    let mut out: Vec<f64> = (0..=n).map(|k| lo + step * k as f64).collect();
    for &r in refine {
        if !(lo..=hi).contains(&r) {
            continue;
        }
        out.push(r);
        for k in 1..=3 {
            let d = step / 2f64.powi(k);
            out.extend([r - d, r + d].into_iter().filter(|x| (lo..=hi).contains(x)));
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * step);
    out
}

/// Polar grid on the closed upper half of the unit disc with `n_radial`
/// rings and `n_angular` nodes per ring. Every point of `refine_near` inside
/// the domain becomes an exact node, with rings and rays graded towards it.
pub fn sample_semicircle(n_radial: usize, n_angular: usize, refine_near: &[Complex64]) -> ParamMesh {
    let n_radial = n_radial.max(1);
    let n_angular = n_angular.max(2);
    let inside: Vec<Complex64> = refine_near
        .iter()
        .copied()
        .filter(|p| p.norm() <= 1.0 && p.im >= 0.0)
        .collect();
    let radii: Vec<f64> = graded_nodes(0.0, 1.0, n_radial, &inside.iter().map(|p| p.norm()).collect::<Vec<_>>())
        .into_iter()
        .filter(|&r| r > 0.0)
        .collect();
    let angles = graded_nodes(0.0, PI, n_angular - 1, &inside.iter().map(|p| p.arg()).collect::<Vec<_>>());

    let mut mesh = ParamMesh::default();
    mesh.points.push(Complex64::new(0.0, 0.0));
    mesh.tags.push(BoundaryTag::Diameter);
    let m = angles.len();
    for (ri, &r) in radii.iter().enumerate() {
        for (ai, &a) in angles.iter().enumerate() {
            mesh.points.push(Complex64::from_polar(r, a));
            mesh.tags.push(if ri + 1 == radii.len() {
                BoundaryTag::Arc
            } else if ai == 0 || ai + 1 == m {
                BoundaryTag::Diameter
            } else {
                BoundaryTag::Interior
            });
        }
    }
    let at = |ri: usize, ai: usize| 1 + ri * m + ai;
    for ai in 0..m - 1 {
        mesh.triangles.push([0, at(0, ai), at(0, ai + 1)]);
    }
    for ri in 0..radii.len() - 1 {
        for ai in 0..m - 1 {
            let (a, b, c, d) = (at(ri, ai), at(ri + 1, ai), at(ri + 1, ai + 1), at(ri, ai + 1));
            mesh.triangles.push([a, b, c]);
            mesh.triangles.push([a, c, d]);
        }
    }
    mesh
}
