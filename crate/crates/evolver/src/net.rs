//! Periodic nets in the text format
//!
//! ```text
//! cell ax ay az bx by bz cx cy cz
//! v fx fy fz
//! e i j ox oy oz
//! ```
//!
//! with fractional vertex coordinates and 0-indexed edges whose second end
//! sits in the cell translated by the integer offset.

use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use tpms_geometry::{Lattice, Vec3};

use crate::EvolverError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NetEdge {
    pub from: usize,
    pub to: usize,
    pub offset: [i32; 3],
}

#[derive(Debug, Clone)]
pub struct PeriodicGraph {
    pub cell: Lattice,
    /// Fractional coordinates.
    pub vertices: Vec<Vec3>,
    pub edges: Vec<NetEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NetSummary {
    pub vertices: usize,
    pub edges: usize,
    pub degrees: Vec<usize>,
    pub genus: i64,
}

const QTZ: &str = include_str!("../nets/qtz.net");

/// The quartz net in a hexagonal cell with `c = a = 1`.
pub fn qtz() -> PeriodicGraph {
    QTZ.parse().expect("bundled net parses")
}

pub fn qtz_source() -> &'static str {
    QTZ
}

fn numbers<T: FromStr>(fields: &[&str], count: usize, line: usize) -> Result<Vec<T>, EvolverError> {
    if fields.len() != count {
        return Err(EvolverError::Parse {
            line,
            msg: format!("expected {count} numbers, found {}", fields.len()),
        });
    }
    fields
        .iter()
        .map(|f| {
            f.parse().map_err(|_| EvolverError::Parse {
                line,
                msg: format!("bad number {f:?}"),
            })
        })
        .collect()
}

impl FromStr for PeriodicGraph {
    type Err = EvolverError;

    /// Parses without the degree check; see [`load_net`].
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut cell = None;
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let fields: Vec<&str> = content.split_whitespace().collect();
            let Some((&tag, rest)) = fields.split_first() else {
                continue;
            };
            match tag {
                "cell" => {
                    let x: Vec<f64> = numbers(rest, 9, line)?;
                    let v = [0, 3, 6].map(|k| Vec3::new(x[k], x[k + 1], x[k + 2]));
                    let volume = v[0].dot(&v[1].cross(&v[2]));
                    cell = Some(Lattice::new(v).map_err(|_| EvolverError::DegenerateCell(volume))?);
                }
                "v" => {
                    let x: Vec<f64> = numbers(rest, 3, line)?;
                    vertices.push(Vec3::new(x[0], x[1], x[2]));
                }
                "e" => {
                    let from: Vec<usize> = numbers(&rest[..rest.len().min(2)], 2, line)?;
                    let off: Vec<i32> = numbers(rest.get(2..).unwrap_or(&[]), 3, line)?;
                    edges.push(NetEdge {
                        from: from[0],
                        to: from[1],
                        offset: [off[0], off[1], off[2]],
                    });
                }
                other => {
                    return Err(EvolverError::Parse {
                        line,
                        msg: format!("unknown record {other:?}"),
                    })
                }
            }
        }
        let cell = cell.ok_or(EvolverError::Parse {
            line: 0,
            msg: "missing cell record".into(),
        })?;
        for (k, e) in edges.iter().enumerate() {
            for v in [e.from, e.to] {
                if v >= vertices.len() {
                    return Err(EvolverError::DanglingEdge { edge: k, vertex: v });
                }
            }
        }
        Ok(Self { cell, vertices, edges })
    }
}

impl PeriodicGraph {
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices.len()];
        for e in &self.edges {
            d[e.from] += 1;
            d[e.to] += 1;
        }
        d
    }

    /// `1 + e - v`.
    pub fn genus(&self) -> i64 {
        1 + self.edges.len() as i64 - self.vertices.len() as i64
    }

    pub fn summary(&self) -> NetSummary {
        NetSummary {
            vertices: self.vertices.len(),
            edges: self.edges.len(),
            degrees: self.degrees(),
            genus: self.genus(),
        }
    }

    /// Rejects empty nets and vertices of degree below three.
    pub fn validate(&self) -> Result<(), EvolverError> {
        if self.edges.is_empty() {
            return Err(EvolverError::Empty);
        }
        if let Some((vertex, &degree)) = self.degrees().iter().enumerate().find(|(_, &d)| d < 3) {
            return Err(EvolverError::LowDegree { vertex, degree });
        }
        Ok(())
    }

    pub fn position(&self, v: usize) -> Vec3 {
        self.cell.to_cartesian(&self.vertices[v])
    }

    /// Cartesian end points of an edge, the second in the offset cell.
    pub fn edge_segment(&self, e: &NetEdge) -> (Vec3, Vec3) {
        (self.position(e.from), self.position(e.to) + self.cell.translation(e.offset))
    }
}

/// Reads and validates a net file.
pub fn load_net(path: impl AsRef<Path>) -> Result<PeriodicGraph, EvolverError> {
    let graph: PeriodicGraph = std::fs::read_to_string(path)?.parse()?;
    graph.validate()?;
    Ok(graph)
}
