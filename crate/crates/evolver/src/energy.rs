//! Discrete `f = sum_v H_v^2 A_v`. The area gradient at `v` is the
//! cotangent mean-curvature vector times `2 A_v`, with `A_v` a third of the
//! incident triangle area. `H_v` is its component along the vertex normal,
//! the normalised sum of incident triangle normals weighted by area.

use rayon::prelude::*;
use tpms_geometry::{PeriodicMesh, Vec3};

struct TriangleFrame {
    unit_normal: Vec3,
    length: f64,
    edges: [Vec3; 3],
}

fn frames(pm: &PeriodicMesh) -> Vec<TriangleFrame> {
    (0..pm.triangle_count())
        .into_par_iter()
        .map(|t| {
            let x = pm.triangle_points(t);
            let n = (x[1] - x[0]).cross(&(x[2] - x[0]));
            let length = n.norm();
            TriangleFrame {
                unit_normal: if length > 0.0 { n / length } else { Vec3::zeros() },
                length,
                // Edge opposite each corner, counter-clockwise.
                edges: [x[2] - x[1], x[0] - x[2], x[1] - x[0]],
            }
        })
        .collect()
}

/// Area gradient and lumped area per vertex.
fn area_gradients(pm: &PeriodicMesh, frames: &[TriangleFrame]) -> (Vec<Vec3>, Vec<f64>) {
    let mut grad = vec![Vec3::zeros(); pm.vertex_count()];
    let mut area = vec![0.0; pm.vertex_count()];
    for (tri, f) in pm.mesh.triangles.iter().zip(frames) {
        for j in 0..3 {
            grad[tri[j]] += 0.5 * f.unit_normal.cross(&f.edges[j]);
            area[tri[j]] += f.length / 6.0;
        }
    }
    (grad, area)
}

/// Unnormalised vertex normals: sums of triangle cross products.
fn normal_sums(pm: &PeriodicMesh, frames: &[TriangleFrame]) -> Vec<Vec3> {
    let mut m = vec![Vec3::zeros(); pm.vertex_count()];
    for (tri, f) in pm.mesh.triangles.iter().zip(frames) {
        for &v in tri {
            m[v] += f.length * f.unit_normal;
        }
    }
    m
}

/// Signed normal mean-curvature terms `g_v . N_v` per vertex.
fn normal_parts(g: &[Vec3], m: &[Vec3]) -> Vec<f64> {
    g.iter()
        .zip(m)
        .map(|(g, m)| {
            let len = m.norm();
            if len > 0.0 {
                g.dot(m) / len
            } else {
                0.0
            }
        })
        .collect()
}

/// Signed per-vertex mean curvature `H = (grad A_v . N_v) / (2 A_v)`.
pub fn mean_curvature(pm: &PeriodicMesh) -> Vec<f64> {
    let frames = frames(pm);
    let (g, a) = area_gradients(pm, &frames);
    let s = normal_parts(&g, &normal_sums(pm, &frames));
    s.iter().zip(&a).map(|(s, a)| if *a > 0.0 { s / (2.0 * a) } else { 0.0 }).collect()
}

pub fn energy(pm: &PeriodicMesh) -> f64 {
    let frames = frames(pm);
    let (g, a) = area_gradients(pm, &frames);
    let s = normal_parts(&g, &normal_sums(pm, &frames));
    s.iter().zip(&a).filter(|(_, a)| **a > 0.0).map(|(s, a)| s * s / (4.0 * a)).sum()
}

/// Energy and its gradient with respect to the vertex positions.
pub fn energy_and_gradient(pm: &PeriodicMesh) -> (f64, Vec<Vec3>) {
    let frames = frames(pm);
    let (g, a) = area_gradients(pm, &frames);
    let m = normal_sums(pm, &frames);
    let mut f = 0.0;
    // Frozen multipliers of d(grad A_v), d(m_v) and d(A_v).
    let mut w = vec![Vec3::zeros(); g.len()];
    let mut q = vec![Vec3::zeros(); g.len()];
    let mut c = vec![0.0; g.len()];
    for v in 0..g.len() {
        let len = m[v].norm();
        if a[v] > 0.0 && len > 0.0 {
            let n = m[v] / len;
            let s = g[v].dot(&n);
            let k = s / (2.0 * a[v]);
            f += s * s / (4.0 * a[v]);
            w[v] = k * n;
            q[v] = k * (g[v] - n * s) / len;
            c[v] = k * k;
        }
    }
    // Sum_v w_v . d(grad A_v) is the derivative of the area in the frozen
    // direction w; the other terms track the vertex normals and the lumped
    // areas.
    let parts: Vec<[Vec3; 3]> = pm
        .mesh
        .triangles
        .par_iter()
        .zip(&frames)
        .map(|(tri, fr)| {
            if fr.length == 0.0 {
                return [Vec3::zeros(); 3];
            }
            let n = fr.unit_normal;
            let wt = tri.map(|v| w[v]);
            let m: Vec3 = (0..3).map(|i| fr.edges[i].cross(&wt[i])).sum();
            let m_perp = m - n * n.dot(&m);
            let lump = (c[tri[0]] + c[tri[1]] + c[tri[2]]) / 3.0;
            let tilt = q[tri[0]] + q[tri[1]] + q[tri[2]];
            std::array::from_fn(|j| {
                let twist = m_perp.cross(&fr.edges[j]) / fr.length + (wt[(j + 1) % 3] - wt[(j + 2) % 3]).cross(&n);
                0.5 * twist - lump * 0.5 * n.cross(&fr.edges[j]) + tilt.cross(&fr.edges[j])
            })
        })
        .collect();
    let mut grad = vec![Vec3::zeros(); g.len()];
    for (tri, p) in pm.mesh.triangles.iter().zip(&parts) {
        for j in 0..3 {
            grad[tri[j]] += p[j];
        }
    }
    (f, grad)
}
