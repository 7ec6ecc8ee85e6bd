//! Space-group operations of the cell.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;
use tpms_geometry::Lattice;

pub type Vec3 = Vector3<f64>;

/// Affine isometry `p -> rot p + trans`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymOp {
    pub rot: Matrix3<f64>,
    pub trans: Vec3,
}

impl SymOp {
    pub fn identity() -> Self {
        Self {
            rot: Matrix3::identity(),
            trans: Vec3::zeros(),
        }
    }

    pub fn apply(&self, p: &Vec3) -> Vec3 {
        self.rot * p + self.trans
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &SymOp) -> SymOp {
        SymOp {
            rot: self.rot * other.rot,
            trans: self.rot * other.trans + self.trans,
        }
    }

    pub fn inverse(&self) -> SymOp {
        let rt = self.rot.transpose();
        SymOp {
            rot: rt,
            trans: -(rt * self.trans),
        }
    }

    /// Same operation modulo lattice translations.
    pub fn matches(&self, other: &SymOp, lattice: &Lattice, tol: f64) -> bool {
        (self.rot - other.rot).abs().max() < 1e-6 && lattice.nearest_vector(&(self.trans - other.trans)).1 < tol
    }

    /// Rotation angle about the axis, in radians.
    pub fn angle(&self) -> f64 {
        ((self.rot.trace() - 1.0) / 2.0).clamp(-1.0, 1.0).acos()
    }
}

/// `x, y, z` rows of a fractional operation with translation in thirds.
type Fractional = ([[i32; 3]; 3], [i32; 3]);

/// The twelve operations of P6_2 22, in fractional coordinates.
const P6222: [Fractional; 12] = [
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [0, 0, 0]),
    ([[0, -1, 0], [1, -1, 0], [0, 0, 1]], [0, 0, 2]),
    ([[-1, 1, 0], [-1, 0, 0], [0, 0, 1]], [0, 0, 1]),
    ([[-1, 0, 0], [0, -1, 0], [0, 0, 1]], [0, 0, 0]),
    ([[0, 1, 0], [-1, 1, 0], [0, 0, 1]], [0, 0, 2]),
    ([[1, -1, 0], [1, 0, 0], [0, 0, 1]], [0, 0, 1]),
    ([[0, 1, 0], [1, 0, 0], [0, 0, -1]], [0, 0, 2]),
    ([[1, -1, 0], [0, -1, 0], [0, 0, -1]], [0, 0, 0]),
    ([[-1, 0, 0], [-1, 1, 0], [0, 0, -1]], [0, 0, 1]),
    ([[0, -1, 0], [-1, 0, 0], [0, 0, -1]], [0, 0, 2]),
    ([[-1, 1, 0], [0, 1, 0], [0, 0, -1]], [0, 0, 0]),
    ([[1, 0, 0], [1, -1, 0], [0, 0, -1]], [0, 0, 1]),
];

/// The twelve operations of P6_2 22 for the hexagonal lattice with `a1`
/// along x ([`Lattice::hexagonal`]), six-fold screw axis on z and a two-fold
/// axis along x at `z = 0`.
pub fn group_generators(c: f64, a: f64) -> Vec<SymOp> {
    let lattice = Lattice::hexagonal(a, c);
    let b = lattice.matrix();
    let b_inv = b.try_inverse().expect("hexagonal lattice is invertible");
    P6222
        .iter()
        .map(|(m, t)| {
            let mf = Matrix3::from_fn(|i, j| m[i][j] as f64);
            let tf = Vec3::new(t[0] as f64, t[1] as f64, t[2] as f64) / 3.0;
            SymOp {
                rot: b * mf * b_inv,
                trans: b * tf,
            }
        })
        .collect()
}

/// Rotation by `angle` about z.
pub fn rot_z(angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Orthogonal matrix closest to mapping each `from` vector onto its `to`.
pub(crate) fn procrustes(pairs: &[(Vec3, Vec3)]) -> Matrix3<f64> {
    let mut h = Matrix3::zeros();
    for (from, to) in pairs {
        h += to * from.transpose();
    }
    let svd = h.svd(true, true);
    let (u, vt) = (svd.u.expect("u"), svd.v_t.expect("v_t"));
    u * vt
}
