use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("mesh is not closed: {open} edges with one side, {excess} with more than two (first near vertex {vertex})")]
    Open { open: usize, excess: usize, vertex: usize },
    #[error("triangle orientation disagrees across the edge at vertices {0} and {1}")]
    Orientation(usize, usize),
    #[error("Euler characteristic {0} is odd; the mesh is not a closed orientable surface")]
    OddEuler(i64),
    #[error("vertex {vertex} has no closed ring of radius {radius}")]
    NoRing { vertex: usize, radius: usize },
    #[error("vertex index {0} out of range")]
    VertexIndex(usize),
    #[error("degenerate lattice (volume {0:e})")]
    DegenerateLattice(f64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
