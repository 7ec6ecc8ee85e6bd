use num_complex::Complex64;
use thiserror::Error;
use tpms_contour::ContourError;
use tpms_geometry::GeometryError;
use tpms_weierstrass::WeierstrassError;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("resolution must be positive")]
    ZeroResolution,
    #[error("continued root at {at} matches no root there (distance {distance:e})")]
    RootMismatch { at: Complex64, distance: f64 },
    #[error("lifted triangle over {at} does not close on one sheet")]
    SheetMismatch { at: Complex64 },
    #[error("surface does not close: residual {residual:e} exceeds {tol:e} (is the period problem solved?)")]
    NotClosed { residual: f64, tol: f64 },
    #[error("no lattice vector of length a = {a} among the periods")]
    LatticeNotFound { a: f64 },
    #[error("symmetry {name} does not map the surface to itself (residual {residual:e})")]
    Symmetry { name: &'static str, residual: f64 },
    #[error("cannot build a fundamental patch: {0}")]
    Patch(String),
    #[error("Scherk domain touches a pole at {0}")]
    ScherkPole(Complex64),
    #[error(transparent)]
    Contour(#[from] ContourError),
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
