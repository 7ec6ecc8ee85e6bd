use thiserror::Error;
use tpms_geometry::GeometryError;

#[derive(Debug, Error)]
pub enum EvolverError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("edge {edge} refers to missing vertex {vertex}")]
    DanglingEdge { edge: usize, vertex: usize },
    #[error("cell volume {0:e} is degenerate")]
    DegenerateCell(f64),
    #[error("vertex {vertex} has degree {degree}, at least 3 required")]
    LowDegree { vertex: usize, degree: usize },
    #[error("net has no edges")]
    Empty,
    #[error("tube radius {radius} too large: clearance between non-adjacent elements is {clearance}, radius must stay below {limit}")]
    RadiusTooLarge { radius: f64, clearance: f64, limit: f64 },
    #[error("convex hull of the collar at vertex {vertex} failed: {msg}")]
    Hull { vertex: usize, msg: String },
    #[error("step keeps inverting triangle {triangle}")]
    Inversion { triangle: usize },
    #[error("mesh has no lattice")]
    NotPeriodic,
    #[error("lattices differ by {0:e}")]
    LatticeMismatch(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
