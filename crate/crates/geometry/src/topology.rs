//! Edges, closedness and Euler characteristic of periodic meshes.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::{GeometryError, PeriodicMesh};

/// An edge between two vertices, with the lattice offset of the second
/// relative to the first. Canonical: `a <= b`, and for self-edges the offset
/// is the lexicographically larger of the two directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeKey {
    pub a: usize,
    pub b: usize,
    pub offset: [i32; 3],
}

fn sub(x: [i32; 3], y: [i32; 3]) -> [i32; 3] {
    [x[0] - y[0], x[1] - y[1], x[2] - y[2]]
}

fn neg(x: [i32; 3]) -> [i32; 3] {
    [-x[0], -x[1], -x[2]]
}

impl EdgeKey {
    /// Key of the directed edge `u -> v`, and whether it runs against the
    /// canonical direction.
    pub fn directed(u: usize, ou: [i32; 3], v: usize, ov: [i32; 3]) -> (Self, bool) {
        let rel = sub(ov, ou);
        if u < v || (u == v && rel >= neg(rel)) {
            (Self { a: u, b: v, offset: rel }, false)
        } else {
            (Self { a: v, b: u, offset: neg(rel) }, true)
        }
    }
}

/// Each edge with the triangles on its two sides.
#[derive(Debug, Clone, Default)]
pub struct EdgeMap {
    /// (triangle, reversed) for each side.
    pub sides: HashMap<EdgeKey, Vec<(usize, bool)>>,
}

impl EdgeMap {
    pub fn build(pm: &PeriodicMesh) -> Self {
        let mut sides: HashMap<EdgeKey, Vec<(usize, bool)>> = HashMap::new();
        for (t, tri) in pm.mesh.triangles.iter().enumerate() {
            for k in 0..3 {
                let (u, v) = (tri[k], tri[(k + 1) % 3]);
                let (key, rev) = EdgeKey::directed(u, pm.offset(t, k), v, pm.offset(t, (k + 1) % 3));
                sides.entry(key).or_default().push((t, rev));
            }
        }
        Self { sides }
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    /// Edges with exactly one incident triangle.
    pub fn boundary(&self) -> impl Iterator<Item = (&EdgeKey, usize)> {
        self.sides
            .iter()
            .filter(|(_, s)| s.len() == 1)
            .map(|(k, s)| (k, s[0].0))
    }

    /// Checks that every edge has two sides with opposite orientation.
    pub fn check_closed(&self) -> Result<(), GeometryError> {
        let mut open = 0;
        let mut excess = 0;
        let mut first = None;
        for (key, s) in &self.sides {
            match s.len() {
                2 => {
                    if s[0].1 == s[1].1 {
                        return Err(GeometryError::Orientation(key.a, key.b));
                    }
                }
                1 => {
                    open += 1;
                    first.get_or_insert(key.a);
                }
                _ => {
                    excess += 1;
                    first.get_or_insert(key.a);
                }
            }
        }
        if open + excess > 0 {
            return Err(GeometryError::Open {
                open,
                excess,
                vertex: first.unwrap_or(0),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler: i64,
    pub genus: i64,
    /// Sheet count `genus - 1` of the Gauss map for a surface in a 3-torus.
    pub sheets: i64,
}

/// Euler characteristic and genus of a closed orientable mesh.
pub fn euler_genus(pm: &PeriodicMesh) -> Result<Topology, GeometryError> {
    let edges = EdgeMap::build(pm);
    edges.check_closed()?;
    let (v, e, f) = (pm.vertex_count(), edges.len(), pm.triangle_count());
    let euler = v as i64 - e as i64 + f as i64;
    if euler % 2 != 0 {
        return Err(GeometryError::OddEuler(euler));
    }
    let genus = 1 - euler / 2;
    Ok(Topology {
        vertices: v,
        edges: e,
        faces: f,
        euler,
        genus,
        sheets: genus - 1,
    })
}

/// Vertex adjacency lists, ignoring lattice offsets.
pub fn vertex_neighbours(pm: &PeriodicMesh) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); pm.vertex_count()];
    for tri in &pm.mesh.triangles {
        for k in 0..3 {
            let (u, v) = (tri[k], tri[(k + 1) % 3]);
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
    }
    for a in adj.iter_mut() {
        a.sort_unstable();
        a.dedup();
    }
    adj
}

/// Triangles incident to each vertex.
pub fn vertex_triangles(pm: &PeriodicMesh) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); pm.vertex_count()];
    for (t, tri) in pm.mesh.triangles.iter().enumerate() {
        for &v in tri {
            if out[v].last() != Some(&t) {
                out[v].push(t);
            }
        }
    }
    out
}

/// Combinatorial distance from `source`, up to `max` (larger entries are
/// `usize::MAX`).
pub fn ring_distances(adj: &[Vec<usize>], source: usize, max: usize) -> HashMap<usize, usize> {
    let mut dist = HashMap::new();
    dist.insert(source, 0);
    let mut frontier = vec![source];
    for d in 1..=max {
        let mut next = Vec::new();
        for &u in &frontier {
            for &w in &adj[u] {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(d);
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    dist
}
