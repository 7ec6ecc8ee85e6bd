//! Triangulated tubes around periodic nets.
//!
//! Every edge carries a sleeve of `segments`-gons. The two end rings of a
//! sleeve sit a collar length away from the net vertices, and the rings
//! meeting at a vertex are joined by the side of their convex hull. A tube
//! around an edge with `k` rings therefore has `segments * k` vertices, and
//! adjacent ring pairs contribute `2 * segments` triangles.

use std::f64::consts::PI;

use tpms_geometry::{weld_periodic, PeriodicMesh, TriMesh, Vec3};

use crate::net::PeriodicGraph;
use crate::EvolverError;

/// Welding tolerance relative to the cell size.
const WELD_REL: f64 = 1e-9;

/// Layout of one sleeve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SleeveLayout {
    /// Distance of each end ring from its net vertex.
    pub collar: [f64; 2],
    /// Rings including the two end rings.
    pub rings: usize,
}

fn segment_distance(p0: Vec3, p1: Vec3, q0: Vec3, q1: Vec3) -> f64 {
    // Closest points on two segments (clamped).
    let (d1, d2, r) = (p1 - p0, q1 - q0, p0 - q0);
    let (a, e, f) = (d1.dot(&d1), d2.dot(&d2), d2.dot(&r));
    let (mut s, mut t);
    if a <= f64::EPSILON && e <= f64::EPSILON {
        return r.norm();
    }
    if a <= f64::EPSILON {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(&r);
        if e <= f64::EPSILON {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(&d2);
            let denom = a * e - b * b;
            s = if denom > 0.0 { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
            t = (b * s + f) / e;
            if t < 0.0 {
                t = 0.0;
                s = (-c / a).clamp(0.0, 1.0);
            } else if t > 1.0 {
                t = 1.0;
                s = ((b - c) / a).clamp(0.0, 1.0);
            }
        }
    }
    (p0 + d1 * s - (q0 + d2 * t)).norm()
}

/// Smallest distance between two edges of the net (over all lattice images)
/// that do not share an end point.
pub fn clearance(graph: &PeriodicGraph) -> f64 {
    let scale = graph.cell.vectors.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let touch = 1e-9 * scale;
    let mut best = f64::INFINITY;
    let segs: Vec<(Vec3, Vec3)> = graph.edges.iter().map(|e| graph.edge_segment(e)).collect();
    for (i, &(p0, p1)) in segs.iter().enumerate() {
        for &(q0, q1) in &segs[i..] {
            for x in -2..=2 {
                for y in -2..=2 {
                    for z in -2..=2 {
                        let t = graph.cell.translation([x, y, z]);
                        let (a, b) = (q0 + t, q1 + t);
                        let shares = [p0, p1].iter().any(|p| (p - a).norm() < touch || (p - b).norm() < touch);
                        if !shares {
                            best = best.min(segment_distance(p0, p1, a, b));
                        }
                    }
                }
            }
        }
    }
    best
}

/// Unit vectors perpendicular to `u` and to each other.
fn frame(u: &Vec3) -> (Vec3, Vec3) {
    let helper = if u.x.abs() < 0.6 { Vec3::x() } else { Vec3::y() };
    let p = u.cross(&helper).normalize();
    (p, u.cross(&p))
}

/// Per-vertex collar lengths: far enough out that every end ring is a face
/// of the hull of the rings at its vertex.
fn collar_lengths(graph: &PeriodicGraph, radius: f64) -> Vec<f64> {
    let mut dirs: Vec<Vec<Vec3>> = vec![Vec::new(); graph.vertices.len()];
    for e in &graph.edges {
        let (a, b) = graph.edge_segment(e);
        let u = (b - a).normalize();
        dirs[e.from].push(u);
        dirs[e.to].push(-u);
    }
    dirs.iter()
        .map(|ds| {
            let mut min_angle = PI;
            for (i, a) in ds.iter().enumerate() {
                for b in &ds[i + 1..] {
                    min_angle = min_angle.min(a.dot(b).clamp(-1.0, 1.0).acos());
                }
            }
            (1.2 * radius / (min_angle / 2.0).tan()).max(0.75 * radius)
        })
        .collect()
}

fn ring(center: Vec3, p: &Vec3, q: &Vec3, radius: f64, segments: usize) -> Vec<Vec3> {
    (0..segments)
        .map(|k| {
            let (s, c) = (2.0 * PI * k as f64 / segments as f64).sin_cos();
            center + radius * (c * p + s * q)
        })
        .collect()
}

fn hull_triangles(points: &[Vec3], vertex: usize) -> Result<Vec<[usize; 3]>, EvolverError> {
    let qh = qhull::Qh::builder()
        .compute(true)
        .triangulate(true)
        .build_from_iter(points.iter().map(|p| [p.x, p.y, p.z]))
        .map_err(|e| EvolverError::Hull {
            vertex,
            msg: format!("{e:?}"),
        })?;
    let mut out = Vec::new();
    for f in qh.simplices() {
        let idx: Vec<usize> = f
            .vertices()
            .map(|vs| vs.iter().filter_map(|v| v.index(&qh)).collect())
            .unwrap_or_default();
        if idx.len() != 3 {
            return Err(EvolverError::Hull {
                vertex,
                msg: "non-triangular facet".into(),
            });
        }
        out.push([idx[0], idx[1], idx[2]]);
    }
    Ok(out)
}

/// Sleeve layouts per edge for the given radius and ring count.
pub fn sleeve_layouts(graph: &PeriodicGraph, radius: f64, segments: usize) -> Result<Vec<SleeveLayout>, EvolverError> {
    let clear = clearance(graph);
    let limit = 0.5 * clear;
    if !(radius > 0.0 && radius < limit) {
        return Err(EvolverError::RadiusTooLarge {
            radius,
            clearance: clear,
            limit,
        });
    }
    let collars = collar_lengths(graph, radius);
    let spacing = 2.0 * PI * radius / segments as f64;
    graph
        .edges
        .iter()
        .map(|e| {
            let (a, b) = graph.edge_segment(e);
            let collar = [collars[e.from], collars[e.to]];
            let free = (b - a).norm() - collar[0] - collar[1];
            if free <= 0.0 {
                return Err(EvolverError::RadiusTooLarge {
                    radius,
                    clearance: clear,
                    limit: radius * (b - a).norm() / (collar[0] + collar[1]),
                });
            }
            Ok(SleeveLayout {
                collar,
                rings: ((free / spacing).round() as usize).max(1) + 1,
            })
        })
        .collect()
}

/// Closed periodic tube of `radius` around `graph`.
pub fn tube_mesh(graph: &PeriodicGraph, radius: f64, segments: usize) -> Result<PeriodicMesh, EvolverError> {
    let segments = segments.max(3);
    let layouts = sleeve_layouts(graph, radius, segments)?;
    let mut vertices: Vec<Vec3> = Vec::new();
    let mut triangles: Vec<[usize; 3]> = Vec::new();
    // End rings gathered per net vertex, in that vertex's home frame.
    let mut collar_rings: Vec<Vec<Vec<Vec3>>> = vec![Vec::new(); graph.vertices.len()];

    for (e, layout) in graph.edges.iter().zip(&layouts) {
        let (a, b) = graph.edge_segment(e);
        let len = (b - a).norm();
        let u = (b - a) / len;
        let (p, q) = frame(&u);
        let t0 = layout.collar[0];
        let t1 = len - layout.collar[1];
        let first = vertices.len();
        for k in 0..layout.rings {
            let t = t0 + (t1 - t0) * k as f64 / (layout.rings - 1) as f64;
            vertices.extend(ring(a + t * u, &p, &q, radius, segments));
        }
        let at = |k: usize, j: usize| first + k * segments + j % segments;
        for k in 0..layout.rings - 1 {
            for j in 0..segments {
                // Counter-clockwise about u, so the normals point outwards.
                triangles.push([at(k, j), at(k, j + 1), at(k + 1, j + 1)]);
                triangles.push([at(k, j), at(k + 1, j + 1), at(k + 1, j)]);
            }
        }
        let shift = graph.cell.translation(e.offset);
        collar_rings[e.from].push(vertices[at(0, 0)..at(0, 0) + segments].to_vec());
        let last = at(layout.rings - 1, 0);
        collar_rings[e.to].push(vertices[last..last + segments].iter().map(|x| x - shift).collect());
    }

    for (v, rings) in collar_rings.iter().enumerate() {
        if rings.is_empty() {
            continue;
        }
        let center = graph.position(v);
        let points: Vec<Vec3> = rings.iter().flatten().copied().collect();
        let ring_of = |i: usize| i / segments;
        let first = vertices.len();
        vertices.extend(&points);
        for t in hull_triangles(&points, v)? {
            if ring_of(t[0]) == ring_of(t[1]) && ring_of(t[1]) == ring_of(t[2]) {
                continue;
            }
            let [x, y, z] = t.map(|i| points[i]);
            let outward = (y - x).cross(&(z - x)).dot(&((x + y + z) / 3.0 - center)) > 0.0;
            let t = if outward { t } else { [t[0], t[2], t[1]] };
            triangles.push(t.map(|i| first + i));
        }
    }

    let scale = graph.cell.vectors.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let welded = weld_periodic(&TriMesh::new(vertices, triangles), &graph.cell, WELD_REL * scale);
    Ok(welded.mesh)
}

