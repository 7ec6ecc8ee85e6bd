use num_complex::Complex64;
use tpms_weierstrass::{FamilyParams, Weierstrass, GUARD_RADIUS};

use crate::segment::{integrate_segment, Chart, QuadOptions, Segment};
use crate::ContourError;

/// Piecewise-linear path in the plane chart, with the sheet fixed by the root
/// at its first anchor.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourPath {
    pub anchors: Vec<Complex64>,
    /// Value of `R` at `anchors[0]` (carries the phase `zeta`).
    pub start_root: Complex64,
    pub min_branch_distance: f64,
}

fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

impl ContourPath {
    pub fn new(
        params: &FamilyParams,
        anchors: Vec<Complex64>,
        start_root: Complex64,
    ) -> Result<Self, ContourError> {
        Self::with_evaluator(&Weierstrass::new(*params), anchors, start_root)
    }

    /// Starts on the anchor sheet at `xi = 0`, which must be the first anchor.
    pub fn from_origin(params: &FamilyParams, rest: &[Complex64]) -> Result<Self, ContourError> {
        let f = Weierstrass::new(*params);
        let mut anchors = vec![Complex64::new(0.0, 0.0)];
        anchors.extend_from_slice(rest);
        Self::with_evaluator(&f, anchors, f.zeta() * f.anchor_unit_root())
    }

    pub fn with_evaluator(
        f: &Weierstrass,
        anchors: Vec<Complex64>,
        start_root: Complex64,
    ) -> Result<Self, ContourError> {
        if anchors.len() < 2 {
            return Err(ContourError::TooFewAnchors(anchors.len()));
        }
        for (anchor, &at) in anchors.iter().enumerate() {
            let (branch, distance) = f.branch_points().nearest(at);
            if distance < GUARD_RADIUS {
                return Err(ContourError::AnchorNearBranchPoint {
                    anchor,
                    at,
                    branch,
                    distance,
                });
            }
        }
        let residual = f.unit_residual(anchors[0], start_root / f.zeta());
        if !(residual <= 1e-10) {
            return Err(ContourError::BadStartRoot {
                at: anchors[0],
                residual,
            });
        }
        let min_branch_distance = f
            .branch_points()
            .iter()
            .flat_map(|&b| {
                anchors
                    .windows(2)
                    .map(move |w| point_segment_distance(b, w[0], w[1]))
            })
            .fold(f64::INFINITY, f64::min);
        Ok(Self {
            anchors,
            start_root,
            min_branch_distance,
        })
    }

    pub fn start(&self) -> Complex64 {
        self.anchors[0]
    }

    pub fn end(&self) -> Complex64 {
        self.anchors[self.anchors.len() - 1]
    }

    /// The same path traversed backwards, starting from `end_root`.
    pub fn reversed(&self, end_root: Complex64) -> Self {
        let mut anchors = self.anchors.clone();
        anchors.reverse();
        Self {
            anchors,
            start_root: end_root,
            min_branch_distance: self.min_branch_distance,
        }
    }
}

/// Result of integrating the three forms along a path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeIntegral {
    /// `phi1..phi3` of the unit-phase root. Coordinates are
    /// `Re(zeta * phi)`, so the Bonnet phase enters exactly once.
    pub phi: [Complex64; 3],
    /// Continued `R` at the endpoint (carries the phase `zeta`).
    pub end_root: Complex64,
    pub quad_error: f64,
}

impl WeIntegral {
    /// `Re(zeta * phi)`.
    pub fn displacement(&self, zeta: Complex64) -> [f64; 3] {
        self.phi.map(|p| (zeta * p).re)
    }
}

pub fn integrate_with(
    f: &Weierstrass,
    path: &ContourPath,
    opts: &QuadOptions,
) -> Result<WeIntegral, ContourError> {
    let zeta = f.zeta();
    let mut r = path.start_root / zeta;
    let mut phi = [Complex64::new(0.0, 0.0); 3];
    let mut quad_error = 0.0;
    for w in path.anchors.windows(2) {
        let seg = Segment::new(Chart::Plane, w[0], w[1]);
        let part = integrate_segment(f, &seg, r, opts)?;
        for k in 0..3 {
            phi[k] += part.phi[k];
        }
        quad_error += part.error;
        r = part.end_root.unwrap_or(r);
    }
    Ok(WeIntegral {
        phi,
        end_root: zeta * r,
        quad_error,
    })
}

/// Integrates `(1 - z^2) R`, `i (1 + z^2) R` and `2 z R` along the path.
pub fn integrate_we(params: &FamilyParams, path: &ContourPath) -> Result<WeIntegral, ContourError> {
    integrate_with(&Weierstrass::new(*params), path, &QuadOptions::default())
}

/// `R` at the end of the path, continued from `start_root`.
pub fn continue_root(params: &FamilyParams, path: &ContourPath) -> Result<Complex64, ContourError> {
    Ok(integrate_we(params, path)?.end_root)
}

/// `base + Re(zeta * phi)`.
pub fn map_point(
    params: &FamilyParams,
    path: &ContourPath,
    base: [f64; 3],
) -> Result<[f64; 3], ContourError> {
    let d = integrate_we(params, path)?.displacement(params.zeta());
    Ok([base[0] + d[0], base[1] + d[1], base[2] + d[2]])
}
