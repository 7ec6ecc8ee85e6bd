//! Angle-deficit Gauss curvature, cotangent mean curvature, vertex normals.

use std::f64::consts::PI;

use crate::topology::EdgeMap;
use crate::{GeometryError, PeriodicMesh, Vec3};

fn corner_angle(p: &Vec3, q: &Vec3, r: &Vec3) -> f64 {
    let (u, v) = (q - p, r - p);
    u.cross(&v).norm().atan2(u.dot(&v))
}

/// Barycentric (one third) area per vertex.
pub fn vertex_areas(pm: &PeriodicMesh) -> Vec<f64> {
    let mut area = vec![0.0; pm.vertex_count()];
    for (t, tri) in pm.mesh.triangles.iter().enumerate() {
        let a = pm.triangle_area(t) / 3.0;
        for &v in tri {
            area[v] += a;
        }
    }
    area
}

/// `2 pi` minus the sum of incident angles, per vertex. Requires a closed mesh.
pub fn angle_deficits(pm: &PeriodicMesh) -> Result<Vec<f64>, GeometryError> {
    EdgeMap::build(pm).check_closed()?;
    let mut def = vec![2.0 * PI; pm.vertex_count()];
    for (t, tri) in pm.mesh.triangles.iter().enumerate() {
        let p = pm.triangle_points(t);
        for k in 0..3 {
            def[tri[k]] -= corner_angle(&p[k], &p[(k + 1) % 3], &p[(k + 2) % 3]);
        }
    }
    Ok(def)
}

/// Gauss curvature per vertex: angle deficit over barycentric area.
#[allow(non_snake_case)]
pub fn angle_deficit_K(pm: &PeriodicMesh) -> Result<Vec<f64>, GeometryError> {
    let def = angle_deficits(pm)?;
    let area = vertex_areas(pm);
    Ok(def.iter().zip(&area).map(|(d, a)| d / a).collect())
}

/// Sum of all angle deficits, which equals `2 pi chi` on a closed mesh.
pub fn gauss_bonnet_total(pm: &PeriodicMesh) -> Result<f64, GeometryError> {
    Ok(angle_deficits(pm)?.iter().sum())
}

/// Area-weighted vertex normals, unit length.
pub fn vertex_normals(pm: &PeriodicMesh) -> Vec<Vec3> {
    let mut n = vec![Vec3::zeros(); pm.vertex_count()];
    for (t, tri) in pm.mesh.triangles.iter().enumerate() {
        let fn_ = pm.triangle_normal(t);
        for &v in tri {
            n[v] += fn_;
        }
    }
    for v in n.iter_mut() {
        let len = v.norm();
        if len > 0.0 {
            *v /= len;
        }
    }
    n
}

/// Cotangent Laplacian of position per vertex, `sum (cot a + cot b)(x_j - x_i) / (2 A_i)`
/// with barycentric `A_i`. Equals `2 H n` on a smooth surface.
pub fn mean_curvature_normal(pm: &PeriodicMesh) -> Vec<Vec3> {
    let mut lap = vec![Vec3::zeros(); pm.vertex_count()];
    for (t, tri) in pm.mesh.triangles.iter().enumerate() {
        let p = pm.triangle_points(t);
        for k in 0..3 {
            // Angle at corner k weights the opposite edge.
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            let (u, v) = (p[i] - p[k], p[j] - p[k]);
            let cot = u.dot(&v) / u.cross(&v).norm().max(f64::MIN_POSITIVE);
            let d = p[j] - p[i];
            lap[tri[i]] += cot * d;
            lap[tri[j]] -= cot * d;
        }
    }
    let area = vertex_areas(pm);
    lap.iter()
        .zip(&area)
        .map(|(l, a)| l / (2.0 * a))
        .collect()
}

/// Unsigned mean curvature per vertex.
pub fn mean_curvature(pm: &PeriodicMesh) -> Vec<f64> {
    mean_curvature_normal(pm).iter().map(|h| 0.5 * h.norm()).collect()
}

/// Mean edge length.
pub fn mean_edge_length(pm: &PeriodicMesh) -> f64 {
    let mut sum = 0.0;
    let mut n = 0usize;
    for t in 0..pm.triangle_count() {
        let p = pm.triangle_points(t);
        for k in 0..3 {
            sum += (p[(k + 1) % 3] - p[k]).norm();
            n += 1;
        }
    }
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}
