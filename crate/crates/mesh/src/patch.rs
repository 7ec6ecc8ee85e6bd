//! The fundamental patch and its replication by the space group.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;
use tpms_geometry::{weld_periodic, BoundaryTag, EdgeMap, Lattice, PeriodicMesh, TriMesh};

use crate::cell::Cell;
use crate::lift::Vec3;
use crate::sphere::Key;
use crate::symmetry::SymOp;
use crate::MeshError;

/// One twelfth of the cell: the unbranched sheet over one plane sector
/// joined to a neighbouring doubly covered piece that holds one flat point.
#[derive(Debug, Clone)]
pub struct Patch {
    /// Aligned coordinates; `vertex_params` holds the source `xi`.
    pub mesh: TriMesh,
    /// Lifted vertex behind each patch vertex.
    pub source: Vec<usize>,
    pub curvature: Vec<f64>,
    pub normals: Vec<Vec3>,
    /// Patch vertex placed first by the spanning tree.
    pub root: usize,
}

fn sector_components(cell: &Cell) -> Vec<(usize, Vec<usize>)> {
    let s = &cell.surface;
    let tris = &cell.mesh.mesh.triangles;
    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (t, tri) in tris.iter().enumerate() {
        for k in 0..3 {
            let (u, v) = (tri[k], tri[(k + 1) % 3]);
            by_edge.entry((u.min(v), u.max(v))).or_default().push(t);
        }
    }
    let sector = |t: usize| s.sphere.triangle_sector[s.triangle_source[t]];
    let mut seen = vec![false; tris.len()];
    let mut out = Vec::new();
    for start in 0..tris.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let sec = sector(start);
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            let tri = tris[t];
            for k in 0..3 {
                let (u, v) = (tri[k], tri[(k + 1) % 3]);
                for &o in &by_edge[&(u.min(v), u.max(v))] {
                    if !seen[o] && sector(o) == sec {
                        seen[o] = true;
                        comp.push(o);
                        queue.push_back(o);
                    }
                }
            }
        }
        comp.sort_unstable();
        out.push((sec, comp));
    }
    out
}

fn edge_set(tris: &[[usize; 3]], comp: &[usize]) -> HashSet<(usize, usize)> {
    comp.iter()
        .flat_map(|&t| {
            let tri = tris[t];
            (0..3).map(move |k| (tri[k].min(tri[(k + 1) % 3]), tri[k].max(tri[(k + 1) % 3])))
        })
        .collect()
}

/// Spherical area of the geodesic triangle on unit vectors.
fn spherical_triangle_area(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let num = a.dot(&b.cross(c));
    let den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * num.atan2(den).abs()
}

impl Patch {
    pub fn from_cell(cell: &Cell) -> Result<Self, MeshError> {
        Self::build(cell, cell.theta, None)
    }

    /// Places the patch by a spanning tree over its own edges at Bonnet
    /// angle `theta`, starting from patch vertex `root` (default: the
    /// vertex over `xi = 0`) at its position in the cell.
    pub fn build(cell: &Cell, theta: f64, root: Option<usize>) -> Result<Self, MeshError> {
        let s = &cell.surface;
        let tris = &cell.mesh.mesh.triangles;
        let comps = sector_components(cell);
        let has_branched = |comp: &[usize]| comp.iter().any(|&t| tris[t].iter().any(|&v| s.vertices[v].root.is_none()));

        let single = comps
            .iter()
            .find(|(sec, comp)| *sec == 0 && !has_branched(comp))
            .ok_or_else(|| MeshError::Patch("no unbranched sheet over the first sector".into()))?;
        let single_edges = edge_set(tris, &single.1);
        let double = comps
            .iter()
            .filter(|(sec, comp)| *sec != 0 && has_branched(comp))
            .find(|(_, comp)| !edge_set(tris, comp).is_disjoint(&single_edges))
            .ok_or_else(|| MeshError::Patch("no branched piece adjacent to the unbranched sheet".into()))?;

        let mut local = HashMap::new();
        let mut source = Vec::new();
        let mut triangles = Vec::new();
        for &t in single.1.iter().chain(&double.1) {
            triangles.push(tris[t].map(|v| {
                *local.entry(v).or_insert_with(|| {
                    source.push(v);
                    source.len() - 1
                })
            }));
        }

        let center = s.sphere.lookup(Key::Center(0)).expect("centre vertex");
        let root = match root {
            Some(r) if r < source.len() => r,
            Some(r) => return Err(MeshError::Patch(format!("root {r} outside the patch"))),
            None => source
                .iter()
                .position(|&v| s.vertices[v].sphere == center)
                .ok_or_else(|| MeshError::Patch("patch misses the centre".into()))?,
        };

        let mut adj = vec![Vec::new(); source.len()];
        for t in &triangles {
            for k in 0..3 {
                let (u, v) = (t[k], t[(k + 1) % 3]);
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let q = cell.alignment.rotation;
        let mut pos: Vec<Option<Vec3>> = vec![None; source.len()];
        pos[root] = Some(cell.mesh.mesh.vertices[source[root]]);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let pu = pos[u].expect("visited");
            for &v in &adj[u] {
                if pos[v].is_none() {
                    let d = s
                        .displacement(source[u], source[v], theta)
                        .ok_or_else(|| MeshError::Patch(format!("missing edge {} -> {}", source[u], source[v])))?;
                    pos[v] = Some(pu + q * d);
                    queue.push_back(v);
                }
            }
        }
        let vertices: Vec<Vec3> = pos.into_iter().map(|p| p.expect("patch is connected")).collect();

        let mut edge_count: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &triangles {
            for k in 0..3 {
                let (u, v) = (t[k], t[(k + 1) % 3]);
                *edge_count.entry((u.min(v), u.max(v))).or_default() += 1;
            }
        }
        let mut tags = vec![BoundaryTag::Interior; source.len()];
        for (&(u, v), &n) in &edge_count {
            if n == 1 {
                for w in [u, v] {
                    tags[w] = if s.sphere.vertices[s.vertices[source[w]].sphere].on_circle {
                        BoundaryTag::Arc
                    } else {
                        BoundaryTag::Diameter
                    };
                }
            }
        }

        let mut mesh = TriMesh::new(vertices, triangles);
        mesh.vertex_params = Some(source.iter().map(|&v| s.sphere.vertices[s.vertices[v].sphere].xi()).collect());
        mesh.boundary_tags = tags;
        Ok(Self {
            curvature: source.iter().map(|&v| s.analytic_curvature(v)).collect(),
            normals: source.iter().map(|&v| cell.gauss_normal(v)).collect(),
            source,
            mesh,
            root,
        })
    }

    /// Patch vertices where the analytic curvature vanishes.
    pub fn flat_points(&self) -> Vec<usize> {
        (0..self.curvature.len()).filter(|&v| self.curvature[v] == 0.0).collect()
    }

    /// Area covered by the Gauss map of the patch.
    pub fn spherical_area(&self) -> f64 {
        self.mesh
            .triangles
            .iter()
            .map(|t| spherical_triangle_area(&self.normals[t[0]], &self.normals[t[1]], &self.normals[t[2]]))
            .sum()
    }
}

/// Edges left without a partner after welding.
#[derive(Debug, Clone, Serialize)]
pub struct SeamReport {
    pub weld_tol: f64,
    pub max_gap: f64,
    pub copies: usize,
    pub vertices_before: usize,
    pub vertices_after: usize,
    pub unmatched_edges: usize,
    pub unmatched_midpoints: Vec<[f64; 3]>,
}

impl SeamReport {
    pub fn is_closed(&self) -> bool {
        self.unmatched_edges == 0
    }
}

/// Default weld tolerance for lattice parameter `a`.
pub fn default_weld_tol(a: f64) -> f64 {
    1e-5 * a
}

/// Copies `patch` by every operation and merges coincident vertices modulo
/// `lattice`.
pub fn replicate_and_weld(patch: &TriMesh, ops: &[SymOp], lattice: &Lattice, weld_tol: f64) -> (PeriodicMesh, SeamReport) {
    let nv = patch.vertices.len();
    let mut vertices = Vec::with_capacity(nv * ops.len());
    let mut triangles = Vec::with_capacity(patch.triangles.len() * ops.len());
    for (i, op) in ops.iter().enumerate() {
        vertices.extend(patch.vertices.iter().map(|p| op.apply(p)));
        let flip = op.rot.determinant() < 0.0;
        triangles.extend(patch.triangles.iter().map(|t| {
            let t = t.map(|v| v + i * nv);
            if flip {
                [t[0], t[2], t[1]]
            } else {
                t
            }
        }));
    }
    let copies = TriMesh::new(vertices, triangles);
    let welded = weld_periodic(&copies, lattice, weld_tol);
    let pm = welded.mesh;
    let edges = EdgeMap::build(&pm);
    let mut unmatched_midpoints: Vec<[f64; 3]> = edges
        .boundary()
        .map(|(k, _)| {
            let m = 0.5 * (pm.mesh.vertices[k.a] + pm.mesh.vertices[k.b] + lattice.translation(k.offset));
            [m.x, m.y, m.z]
        })
        .collect();
    unmatched_midpoints.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    let report = SeamReport {
        weld_tol,
        max_gap: welded.max_gap,
        copies: ops.len(),
        vertices_before: copies.vertices.len(),
        vertices_after: pm.vertex_count(),
        unmatched_edges: unmatched_midpoints.len(),
        unmatched_midpoints,
    };
    (pm, report)
}

/// Largest distance from an image `op(v)` to the nearest vertex modulo the
/// lattice, or `None` if some image has no vertex within `tol`.
pub fn invariance_gap(pm: &PeriodicMesh, op: &SymOp, lattice: &Lattice, tol: f64) -> Option<f64> {
    let n = pm.vertex_count();
    let mut points = pm.mesh.vertices.clone();
    points.extend(pm.mesh.vertices.iter().map(|p| op.apply(p)));
    let welded = weld_periodic(&TriMesh::new(points, Vec::new()), lattice, tol);
    (welded.mesh.vertex_count() == n && welded.map[..n].iter().enumerate().all(|(i, &m)| i == m)).then_some(welded.max_gap)
}
