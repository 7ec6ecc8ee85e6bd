use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::WeierstrassError;

/// The two limiting members of the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScherkKind {
    /// Sheared doubly periodic Scherk surface, reached at `theta = pi`.
    Doubly,
    /// Sheared singly periodic Scherk surface, reached at `theta = pi/2`.
    Singly,
}

impl ScherkKind {
    /// Bonnet phase carried by the limit function.
    pub fn phase(self) -> Complex64 {
        match self {
            ScherkKind::Doubly => Complex64::new(1.0, 0.0),
            ScherkKind::Singly => Complex64::new(0.0, 1.0),
        }
    }
}

/// `2 / (xi^4 + xi^2 + 1)` or `2i / (xi^4 + xi^2 + 1)`.
pub fn scherk_limit_r(kind: ScherkKind, xi: Complex64) -> Result<Complex64, WeierstrassError> {
    let x2 = xi * xi;
    let den = x2 * x2 + x2 + 1.0;
    if den.norm() < 1e-12 * (1.0 + x2.norm_sqr()) {
        return Err(WeierstrassError::ScherkPole(xi));
    }
    Ok(2.0 * kind.phase() / den)
}
