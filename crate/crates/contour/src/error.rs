use num_complex::Complex64;
use thiserror::Error;
use tpms_weierstrass::WeierstrassError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContourError {
    #[error(
        "roots collide near xi = {at} (separation {separation:.3e}); \
         perturb the path away from this point"
    )]
    RootCollision { at: Complex64, separation: f64 },
    #[error("quadrature budget of {panels} panels exhausted (error estimate {estimate:.3e})")]
    ToleranceNotMet { panels: usize, estimate: f64 },
    #[error("path needs at least two anchors, got {0}")]
    TooFewAnchors(usize),
    #[error("anchor {anchor} at {at} is {distance:.3e} from branch point {branch}")]
    AnchorNearBranchPoint {
        anchor: usize,
        at: Complex64,
        branch: usize,
        distance: f64,
    },
    #[error("start root misses the cubic at {at} (relative residual {residual:.3e})")]
    BadStartRoot { at: Complex64, residual: f64 },
    #[error("segment endpoint {at} is not branch point {index}")]
    EndpointMismatch { at: Complex64, index: usize },
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
}
