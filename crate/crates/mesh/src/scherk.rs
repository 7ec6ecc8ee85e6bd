//! Meshes of the two Scherk limits, built from the rational limit function.

use std::collections::VecDeque;
use std::f64::consts::PI;

use num_complex::Complex64;
use tpms_contour::{gauss_kronrod_nodes, Chart};
use tpms_geometry::TriMesh;
use tpms_weierstrass::{scherk_limit_r, ScherkKind};

use crate::lift::Vec3;
use crate::param::{sample_semicircle, ParamMesh};
use crate::MeshError;

/// Closest approach to a pole allowed for a domain edge.
pub const POLE_GUARD: f64 = 1e-6;

const EDGE_TOL: f64 = 1e-12;

/// The six poles of the limit function, on the unit circle.
pub fn scherk_poles() -> [Complex64; 6] {
    std::array::from_fn(|k| Complex64::from_polar(1.0, PI / 3.0 * if k < 3 { k as f64 + 1.0 } else { k as f64 + 2.0 }))
}

/// Upper half disc of `radius` with `resolution` rings and `2 * resolution`
/// angular intervals, graded towards the two poles on its rim.
pub fn scherk_domain(resolution: usize, radius: f64) -> ParamMesh {
    let rim = &scherk_poles()[..2];
    sample_semicircle(resolution, 2 * resolution + 1, rim).scaled(radius)
}

/// Vertical over horizontal extent.
pub fn extent_anisotropy(mesh: &TriMesh) -> f64 {
    let extent = |k: usize| {
        let (lo, hi) = mesh
            .vertices
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[k]), hi.max(p[k])));
        hi - lo
    };
    extent(2) / extent(0).hypot(extent(1))
}

/// Dihedral angle between the two ends of a singly periodic mesh, from the
/// unit normals at the vertices closest to the two rim poles.
pub fn end_angle(mesh: &TriMesh) -> Option<f64> {
    let params = mesh.vertex_params.as_ref()?;
    let normals = tpms_geometry::vertex_normals(&tpms_geometry::PeriodicMesh::closed(mesh.clone()));
    let nearest = |p: Complex64| {
        (0..params.len())
            .min_by(|&a, &b| (params[a] - p).norm().total_cmp(&(params[b] - p).norm()))
            .expect("non-empty mesh")
    };
    let [p1, p2, ..] = scherk_poles();
    let (n1, n2) = (normals[nearest(p1)], normals[nearest(p2)]);
    Some(PI - n1.dot(&n2).clamp(-1.0, 1.0).acos())
}

fn distance_to_segment(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let t = if d.norm_sqr() > 0.0 {
        (((p - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (a + d * t - p).norm()
}

fn forms(kind: ScherkKind, xi: Complex64) -> Result<[Complex64; 3], MeshError> {
    let r = scherk_limit_r(kind, xi).map_err(|_| MeshError::ScherkPole(xi))?;
    Ok(Chart::Plane.forms(xi, r))
}

fn panel(kind: ScherkKind, a: Complex64, b: Complex64) -> Result<([Complex64; 3], f64), MeshError> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kron = [Complex64::new(0.0, 0.0); 3];
    let mut gauss = kron;
    for (x, wk, wg) in gauss_kronrod_nodes() {
        let f = forms(kind, mid + half * x)?;
        for k in 0..3 {
            kron[k] += f[k] * half * wk;
            gauss[k] += f[k] * half * wg;
        }
    }
    let err = (0..3).map(|k| (kron[k] - gauss[k]).norm()).fold(0.0, f64::max);
    Ok((kron, err))
}

/// Integral of the forms along the straight segment `a -> b`, bisected until
/// the Kronrod and Gauss estimates agree.
fn integrate_edge(kind: ScherkKind, a: Complex64, b: Complex64, depth: u32) -> Result<[Complex64; 3], MeshError> {
    let (value, err) = panel(kind, a, b)?;
    if err <= EDGE_TOL * (1.0 + value.iter().map(|v| v.norm()).fold(0.0, f64::max)) || depth == 0 {
        return Ok(value);
    }
    let m = 0.5 * (a + b);
    let l = integrate_edge(kind, a, m, depth - 1)?;
    let r = integrate_edge(kind, m, b, depth - 1)?;
    Ok(std::array::from_fn(|k| l[k] + r[k]))
}

/// Maps `domain` onto the Scherk limit `kind`, integrating along a spanning
/// tree rooted at the first domain vertex.
pub fn scherk_mesh(kind: ScherkKind, domain: &ParamMesh) -> Result<TriMesh, MeshError> {
    let n = domain.points.len();
    let mut adj = vec![Vec::new(); n];
    for t in &domain.triangles {
        for k in 0..3 {
            let (u, v) = (t[k], t[(k + 1) % 3]);
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    for (u, nb) in adj.iter().enumerate() {
        for &v in nb {
            for p in scherk_poles() {
                if distance_to_segment(p, domain.points[u], domain.points[v]) < POLE_GUARD {
                    return Err(MeshError::ScherkPole(p));
                }
            }
        }
    }

    let mut pos: Vec<Option<Vec3>> = vec![None; n];
    if n > 0 {
        pos[0] = Some(Vec3::zeros());
    }
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        let pu = pos[u].expect("visited");
        for &v in &adj[u] {
            if pos[v].is_none() {
                let phi = integrate_edge(kind, domain.points[u], domain.points[v], 30)?;
                pos[v] = Some(pu + Vec3::new(phi[0].re, phi[1].re, phi[2].re));
                queue.push_back(v);
            }
        }
    }
    let vertices = pos
        .into_iter()
        .map(|p| p.ok_or_else(|| MeshError::Patch("Scherk domain is not connected".into())))
        .collect::<Result<Vec<_>, _>>()?;
    let mut mesh = TriMesh::new(vertices, domain.triangles.clone());
    mesh.vertex_params = Some(domain.points.clone());
    mesh.boundary_tags = domain.tags.clone();
    Ok(mesh)
}

/// Height of the doubly periodic limit in closed form.
pub fn doubly_height(xi: Complex64) -> f64 {
    let s3 = 3f64.sqrt();
    let w = (2.0 * xi * xi + 1.0) / s3;
    (4.0 / s3 * (w.atan() - (1.0 / s3).atan())).re
}
