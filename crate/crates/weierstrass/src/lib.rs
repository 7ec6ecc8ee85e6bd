//! Weierstrass function of the QTZ-QZD family of chiral minimal surfaces.
//!
//! A family member is fixed by `(delta, eta, theta)`. The first two place the
//! twelve branch points
//!
//! ```text
//! (1 - delta)      e^{i((2m+1)pi/6 + eta)}   m = 0..5   (inner ring)
//! (1 - delta)^{-1} e^{i((2m+1)pi/6 - eta)}   m = 0..5   (outer ring)
//! ```
//!
//! which are the zeros of `g(xi) = (xi^6 + A)(xi^6 + 1/A)` with
//! `A = (1 - delta)^6 e^{6 i eta}`. The Weierstrass function `R` is a root of
//!
//! ```text
//! R^3 + 3 zeta^2 Q xi^2 R - 2 zeta^3 Q = 0,     Q = g(i) / g(xi),
//! ```
//!
//! with `zeta = e^{i theta}`. Every root scales linearly with `zeta`, so most
//! of the crate works with the unit-phase cubic (`zeta = 1`) and multiplies by
//! `zeta` on the way out.
//!
//! ```
//! use tpms_weierstrass::{FamilyParams, Weierstrass};
//!
//! let p = FamilyParams::new(0.2, 0.05, 2.45).unwrap();
//! let w = Weierstrass::new(p);
//! let roots = w.solve(num_complex::Complex64::new(0.3, -0.2)).unwrap();
//! let sum = roots.unbranched + roots.branched1 + roots.branched2;
//! assert!(sum.norm() < 1e-12);
//! ```

mod error;
mod function;
mod params;
mod scherk;
mod structure;

pub use error::WeierstrassError;
pub use function::{
    branch_points, discriminant, discriminant_cleared, gaussian_curvature, poly_g, poly_q,
    r_at_branch_point, solve_r, BranchPointSet, RootTriple, ShiftedG, Weierstrass,
};
pub use params::FamilyParams;
pub use scherk::{scherk_limit_r, ScherkKind};
pub use structure::{feasible_branch_structures, BranchStructure};

pub use num_complex::Complex64;

/// Radius around a branch point inside which direct evaluation is refused.
pub const GUARD_RADIUS: f64 = 1e-9;

/// Primitive cube root of unity `e^{2 pi i / 3}`.
pub const OMEGA: Complex64 = Complex64::new(-0.5, 0.866_025_403_784_438_6);

/// Cube root whose argument is taken from `[0, 2 pi)` before division by 3.
///
/// The principal cube root jumps across the negative real axis. `2 g(i)` sits
/// on that axis at `eta = 0`, so the anchor sheet uses this convention instead.
pub fn cbrt_upper(z: Complex64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    let mut arg = z.arg();
    if arg < 0.0 {
        arg += std::f64::consts::TAU;
    }
    Complex64::from_polar(z.norm().cbrt(), arg / 3.0)
}
