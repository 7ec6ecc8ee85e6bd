//! Lifting the sphere triangulation to the three-sheeted surface.
//!
//! Every sphere vertex carries one lifted vertex per root of the cubic; a
//! branch point carries two (the finite root and the double branched one).
//! Each sphere edge is continued from every root at one endpoint, which
//! fixes the sheet at the other endpoint and the Weierstrass integrals along
//! it. Lifted triangles follow from the edges.

use std::collections::HashMap;

use nalgebra::Vector3;
use num_complex::Complex64;
use rayon::prelude::*;
use tpms_contour::{integrate_segment, Chart, QuadOptions, Segment};
use tpms_weierstrass::{FamilyParams, Weierstrass};

use crate::sphere::SphereMesh;
use crate::MeshError;

pub type Vec3 = Vector3<f64>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftedVertex {
    pub sphere: usize,
    /// Unit-phase root in the sphere vertex's chart; `None` on the branched
    /// sheet at a branch point.
    pub root: Option<Complex64>,
}

/// A lifted edge with its unit-phase Weierstrass integrals from `from` to `to`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftedEdge {
    pub from: usize,
    pub to: usize,
    pub phi: [Complex64; 3],
}

#[derive(Debug, Clone)]
pub struct LiftedSurface {
    pub f: Weierstrass,
    pub sphere: SphereMesh,
    pub vertices: Vec<LiftedVertex>,
    /// First lifted vertex of each sphere vertex.
    pub first: Vec<usize>,
    pub triangles: Vec<[usize; 3]>,
    /// Sphere triangle under each lifted triangle.
    pub triangle_source: Vec<usize>,
    pub edges: Vec<LiftedEdge>,
    edge_index: HashMap<(usize, usize), usize>,
}

fn convert_root(v: &crate::sphere::SphereVertex, chart: Chart, r: Complex64) -> Complex64 {
    if chart == v.chart {
        return r;
    }
    // R~ = xi^4 R and R = w^4 R~, both with the stored coordinate.
    let z2 = v.z * v.z;
    r * z2 * z2
}

fn nearest(roots: &[Complex64], r: Complex64) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (k, q) in roots.iter().enumerate() {
        let d = (q - r).norm();
        if d < best.1 {
            best = (k, d);
        }
    }
    best
}

impl LiftedSurface {
    pub fn build(params: FamilyParams, n: usize, quad: &QuadOptions) -> Result<Self, MeshError> {
        if n == 0 {
            return Err(MeshError::ZeroResolution);
        }
        let f = Weierstrass::new(params);
        let sphere = SphereMesh::new(&f, n);

        let mut vertices = Vec::new();
        let mut first = Vec::with_capacity(sphere.vertices.len());
        for (i, v) in sphere.vertices.iter().enumerate() {
            first.push(vertices.len());
            match v.branch {
                Some(b) => {
                    let finite = f.unit_root_at_branch_point(b)?;
                    vertices.push(LiftedVertex { sphere: i, root: Some(finite) });
                    vertices.push(LiftedVertex { sphere: i, root: None });
                }
                None => {
                    for r in f.unit_roots(v.z) {
                        vertices.push(LiftedVertex { sphere: i, root: Some(r) });
                    }
                }
            }
        }
        let slots = |v: usize| if sphere.vertices[v].branch.is_some() { 2 } else { 3 };

        let sphere_edges = sphere.edges();
        let lifted: Vec<Vec<LiftedEdge>> = sphere_edges
            .par_iter()
            .map(|&(a, b, chart)| -> Result<Vec<LiftedEdge>, MeshError> {
                // Integrate away from a branch point, never towards one
                // that starts the segment.
                let (s, t) = if sphere.vertices[a].branch.is_some() { (b, a) } else { (a, b) };
                let (vs, vt) = (&sphere.vertices[s], &sphere.vertices[t]);
                let seg = match vt.branch {
                    Some(index) => Segment::to_branch_point(chart, vs.coordinate(chart), &f, index),
                    None => Segment::new(chart, vs.coordinate(chart), vt.coordinate(chart)),
                };
                let target: Vec<Complex64> = (0..slots(t))
                    .filter_map(|k| vertices[first[t] + k].root.map(|r| convert_root(vt, chart, r)))
                    .collect();
                let mut out = Vec::with_capacity(3);
                for k in 0..3 {
                    let start = convert_root(vs, chart, vertices[first[s] + k].root.expect("regular vertex"));
                    let res = integrate_segment(&f, &seg, start, quad)?;
                    let slot = match (vt.branch, res.end_root) {
                        (Some(_), Some(_)) => 0,
                        (Some(_), None) => 1,
                        (None, Some(end)) => {
                            let (slot, d) = nearest(&target, end);
                            if d > 1e-6 * (1.0 + end.norm()) {
                                return Err(MeshError::RootMismatch { at: vt.xi(), distance: d });
                            }
                            slot
                        }
                        (None, None) => unreachable!("plain segments always end on a root"),
                    };
                    out.push(LiftedEdge {
                        from: first[s] + k,
                        to: first[t] + slot,
                        phi: res.phi,
                    });
                }
                Ok(out)
            })
            .collect::<Result<_, _>>()?;
        let edges: Vec<LiftedEdge> = lifted.into_iter().flatten().collect();
        let mut edge_index = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            edge_index.insert((e.from.min(e.to), e.from.max(e.to)), i);
        }

        // Sheet-following map per sphere edge: slot at one end -> slot at the other.
        let mut follow: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
        for e in &edges {
            let (sa, sb) = (vertices[e.from].sphere, vertices[e.to].sphere);
            let (ka, kb) = (e.from - first[sa], e.to - first[sb]);
            follow.entry((sa, sb)).or_default().push((ka, kb));
            if sphere.vertices[sb].branch.is_none() {
                follow.entry((sb, sa)).or_default().push((kb, ka));
            }
        }
        let step = |a: usize, k: usize, b: usize| -> Option<usize> {
            follow.get(&(a, b))?.iter().find(|(x, _)| *x == k).map(|&(_, y)| y)
        };

        let mut triangles = Vec::with_capacity(3 * sphere.triangles.len());
        let mut triangle_source = Vec::with_capacity(3 * sphere.triangles.len());
        for (ti, t) in sphere.triangles.iter().enumerate() {
            // Rotate so the first corner is not a branch point.
            let r = (0..3).find(|&k| sphere.vertices[t[k]].branch.is_none()).expect("one branch point per triangle at most");
            let [a, b, c] = [t[r], t[(r + 1) % 3], t[(r + 2) % 3]];
            let at = sphere.vertices[a].xi();
            for k in 0..3 {
                let kb = step(a, k, b).ok_or(MeshError::SheetMismatch { at })?;
                let kc = step(a, k, c).ok_or(MeshError::SheetMismatch { at })?;
                let consistent = if sphere.vertices[b].branch.is_none() {
                    step(b, kb, c) == Some(kc)
                } else {
                    step(c, kc, b) == Some(kb)
                };
                if !consistent {
                    return Err(MeshError::SheetMismatch { at });
                }
                triangles.push([first[a] + k, first[b] + kb, first[c] + kc]);
                triangle_source.push(ti);
            }
        }
        Ok(Self {
            f,
            sphere,
            vertices,
            first,
            triangles,
            triangle_source,
            edges,
            edge_index,
        })
    }

    pub fn params(&self) -> &FamilyParams {
        self.f.params()
    }

    /// Integrals from `u` to `v` along their edge.
    pub fn edge_phi(&self, u: usize, v: usize) -> Option<[Complex64; 3]> {
        let e = &self.edges[*self.edge_index.get(&(u.min(v), u.max(v)))?];
        Some(if e.from == u { e.phi } else { e.phi.map(|p| -p) })
    }

    /// Displacement from `u` to `v` at Bonnet angle `theta`.
    pub fn displacement(&self, u: usize, v: usize, theta: f64) -> Option<Vec3> {
        let zeta = Complex64::from_polar(1.0, theta);
        self.edge_phi(u, v).map(|p| Vec3::new((zeta * p[0]).re, (zeta * p[1]).re, (zeta * p[2]).re))
    }

    /// Lifted vertex adjacency through edges.
    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e.from].push(e.to);
            adj[e.to].push(e.from);
        }
        adj
    }

    /// Positions by breadth-first accumulation of edge displacements from
    /// `root`, which is placed at the origin.
    pub fn tree_positions(&self, theta: f64, root: usize) -> Vec<Vec3> {
        let adj = self.neighbours();
        let mut pos = vec![Vec3::zeros(); self.vertices.len()];
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = std::collections::VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    pos[v] = pos[u] + self.displacement(u, v, theta).expect("adjacent");
                    queue.push_back(v);
                }
            }
        }
        pos
    }

    /// The lifted vertex over `xi = 0` on the anchor sheet.
    pub fn anchor(&self) -> usize {
        let center = self.sphere.lookup(crate::sphere::Key::Center(0)).expect("centre vertex");
        let anchor = self.f.anchor_unit_root();
        let roots: Vec<Complex64> = (0..3).map(|k| self.vertices[self.first[center] + k].root.unwrap_or_default()).collect();
        self.first[center] + nearest(&roots, anchor).0
    }

    /// Analytic Gauss curvature at a lifted vertex (zero on the branched sheet).
    pub fn analytic_curvature(&self, v: usize) -> f64 {
        let lv = &self.vertices[v];
        match lv.root {
            None => 0.0,
            Some(r) => {
                let z = self.sphere.vertices[lv.sphere].z;
                // Same expression in either chart.
                let s = 1.0 + z.norm_sqr();
                -4.0 / (s.powi(4) * r.norm_sqr())
            }
        }
    }

    /// Gauss normal `(2 Re xi, 2 Im xi, |xi|^2 - 1) / (|xi|^2 + 1)` at a lifted vertex.
    pub fn gauss_normal(&self, v: usize) -> Vec3 {
        let sv = &self.sphere.vertices[self.vertices[v].sphere];
        let z = sv.z;
        let d = 1.0 + z.norm_sqr();
        match sv.chart {
            Chart::Plane => Vec3::new(2.0 * z.re / d, 2.0 * z.im / d, (z.norm_sqr() - 1.0) / d),
            // xi = 1/w: (2 Re w, -2 Im w, 1 - |w|^2) / (1 + |w|^2).
            Chart::Inverted => Vec3::new(2.0 * z.re / d, -2.0 * z.im / d, (1.0 - z.norm_sqr()) / d),
        }
    }
}
