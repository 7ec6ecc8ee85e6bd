//! The three closing conditions and the lattice they produce.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use tpms_contour::{integrate_with, ContourPath, QuadOptions, WeIntegral};
use tpms_weierstrass::{FamilyParams, Weierstrass};

use crate::PeriodError;

const SQRT3: f64 = 1.732_050_808_568_877_2;

/// Endpoints of the three constraint paths: `i`, `1`, `e^{-i pi/3}`.
pub fn constraint_targets() -> [Complex64; 3] {
    [
        Complex64::new(0.0, 1.0),
        Complex64::new(1.0, 0.0),
        Complex64::from_polar(1.0, -PI / 3.0),
    ]
}

/// Anchors of the path to `i`: out to the unit circle midway between the
/// inner branch points on either side of `e^{i(pi/3 + eta)}`, then along the
/// circle, which no branch point touches. Chords are short enough to stay
/// well clear of the inner ring.
pub fn path_to_i(params: &FamilyParams) -> Vec<Complex64> {
    let start = PI / 3.0 + params.eta;
    let sweep = FRAC_PI_2 - start;
    let max_chord = 0.5 * params.delta.sqrt();
    let n = (sweep.abs() / max_chord).ceil().max(1.0) as usize;
    (0..=n)
        .map(|k| Complex64::from_polar(1.0, start + sweep * k as f64 / n as f64))
        .collect()
}

/// Paths from the origin on the anchor sheet, in a homotopy class that stays
/// the same across the family.
pub fn constraint_paths(params: &FamilyParams) -> Result<[ContourPath; 3], PeriodError> {
    let [_, to_one, to_w] = constraint_targets();
    Ok([
        ContourPath::from_origin(params, &path_to_i(params))?,
        ContourPath::from_origin(params, &[to_one])?,
        ContourPath::from_origin(params, &[to_w])?,
    ])
}

/// Unit-phase integrals along the three constraint paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodIntegrals {
    pub to_i: WeIntegral,
    pub to_one: WeIntegral,
    pub to_w: WeIntegral,
}

impl PeriodIntegrals {
    pub fn compute(params: &FamilyParams, quad: &QuadOptions) -> Result<Self, PeriodError> {
        let f = Weierstrass::new(*params);
        let [p_i, p_one, p_w] = constraint_paths(params)?;
        Ok(Self {
            to_i: integrate_with(&f, &p_i, quad)?,
            to_one: integrate_with(&f, &p_one, quad)?,
            to_w: integrate_with(&f, &p_w, quad)?,
        })
    }

    /// `(x(i), y(1), z(e^{-i pi/3}))` for Bonnet angle `theta`, base point 0.
    pub fn residuals(&self, theta: f64) -> [f64; 3] {
        let zeta = Complex64::from_polar(1.0, theta);
        [
            (zeta * self.to_i.phi[0]).re,
            (zeta * self.to_one.phi[1]).re,
            (zeta * self.to_w.phi[2]).re,
        ]
    }

    /// Bonnet angle in `[0, 2 pi)` that zeroes `x(i)` and makes the vertical
    /// period positive.
    pub fn closing_angle(&self) -> f64 {
        let base = FRAC_PI_2 - self.to_i.phi[0].arg();
        let c_sign = |t: f64| -(Complex64::from_polar(1.0, t) * self.to_one.phi[2]).re;
        let theta = if c_sign(base) < 0.0 { base + PI } else { base };
        theta.rem_euclid(2.0 * PI)
    }

    pub fn lattice(&self, theta: f64) -> Lattice {
        let zeta = Complex64::from_polar(1.0, theta);
        let d = |w: &WeIntegral| w.displacement(zeta);
        let (one, at_i, w) = (d(&self.to_one), d(&self.to_i), d(&self.to_w));
        let c = -6.0 * one[2];
        let a = 2.0 * SQRT3 * (w[0] + w[1] / SQRT3).abs();
        Lattice {
            c,
            c_check: 3.0 * at_i[2],
            a,
            rho: c / a,
        }
    }

    pub fn quad_error(&self) -> f64 {
        self.to_i.quad_error + self.to_one.quad_error + self.to_w.quad_error
    }
}

/// Lattice constants read off the constraint integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    /// Vertical period from `z(1)`.
    pub c: f64,
    /// Vertical period from `z(i)`; equals `c` on a solved member.
    pub c_check: f64,
    /// Horizontal period.
    pub a: f64,
    pub rho: f64,
}

impl Lattice {
    pub fn relative_mismatch(&self) -> f64 {
        (self.c - self.c_check).abs() / self.c.abs().max(f64::MIN_POSITIVE)
    }
}

pub fn residuals(params: &FamilyParams) -> Result<[f64; 3], PeriodError> {
    Ok(PeriodIntegrals::compute(params, &QuadOptions::default())?.residuals(params.theta))
}

/// `(c, a, rho)`, refusing parameter sets whose two `c` estimates disagree
/// by more than `1e-6` relative or whose residuals exceed `1e-6`.
///
/// The two estimates coincide for every parameter set with `x(i) = 0`, so
/// the residual check is what catches most unsolved input.
pub fn lattice_params(params: &FamilyParams) -> Result<(f64, f64, f64), PeriodError> {
    let ints = PeriodIntegrals::compute(params, &QuadOptions::default())?;
    let worst = ints
        .residuals(params.theta)
        .iter()
        .fold(0.0f64, |m, r| m.max(r.abs()));
    if worst > 1e-6 {
        return Err(PeriodError::Unsolved(worst));
    }
    let lat = ints.lattice(params.theta);
    if lat.relative_mismatch() > 1e-6 {
        return Err(PeriodError::InconsistentPeriod {
            c: lat.c,
            c_check: lat.c_check,
        });
    }
    if !(lat.c > 0.0 && lat.a > 0.0) {
        return Err(PeriodError::NonPositiveLattice { c: lat.c, a: lat.a });
    }
    Ok((lat.c, lat.a, lat.rho))
}
