use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{cbrt_upper, FamilyParams, WeierstrassError, GUARD_RADIUS, OMEGA};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The twelve branch points, inner ring (m = 0..5) first, then the outer ring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPointSet {
    pub points: [Complex64; 12],
}

impl BranchPointSet {
    pub fn new(params: &FamilyParams) -> Self {
        let inner = 1.0 - params.delta;
        let mut points = [Complex64::new(0.0, 0.0); 12];
        for m in 0..6 {
            let base = (2 * m + 1) as f64 * PI / 6.0;
            points[m] = Complex64::from_polar(inner, base + params.eta);
            points[m + 6] = Complex64::from_polar(1.0 / inner, base - params.eta);
        }
        Self { points }
    }

    /// Index of and distance to the closest branch point.
    pub fn nearest(&self, xi: Complex64) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (k, p) in self.points.iter().enumerate() {
            let d = (xi - p).norm();
            if d < best.1 {
                best = (k, d);
            }
        }
        best
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.points.iter()
    }
}

/// The three values of `R` at one point.
///
/// Labels follow the closed-form Cardano expression with cube roots taken in
/// the `[0, 2 pi)` convention. They coincide with the sheet structure only at
/// the anchor `xi = 0`; everywhere else sheets are defined by continuation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootTriple {
    pub unbranched: Complex64,
    pub branched1: Complex64,
    pub branched2: Complex64,
}

impl RootTriple {
    pub fn to_array(self) -> [Complex64; 3] {
        [self.unbranched, self.branched1, self.branched2]
    }

    fn from_array(r: [Complex64; 3]) -> Self {
        Self {
            unbranched: r[0],
            branched1: r[1],
            branched2: r[2],
        }
    }
}

/// `g` expanded about one of its roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedG {
    pub center: Complex64,
    coeffs: [Complex64; 13],
}

impl ShiftedG {
    /// `g(center + offset)`.
    pub fn eval(&self, offset: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * offset + c)
    }
}

/// Precomputed evaluator for one family member.
#[derive(Debug, Clone, Copy)]
pub struct Weierstrass {
    params: FamilyParams,
    b: Complex64,
    g_i: Complex64,
    zeta: Complex64,
    branch: BranchPointSet,
}

impl Weierstrass {
    pub fn new(params: FamilyParams) -> Self {
        let a = params.a();
        let b = a + a.inv();
        Self {
            params,
            b,
            g_i: 2.0 - b,
            zeta: params.zeta(),
            branch: BranchPointSet::new(&params),
        }
    }

    pub fn params(&self) -> &FamilyParams {
        &self.params
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta
    }

    pub fn branch_points(&self) -> &BranchPointSet {
        &self.branch
    }

    /// `g(i) = 2 - A - 1/A`.
    pub fn g_at_i(&self) -> Complex64 {
        self.g_i
    }

    pub fn g(&self, xi: Complex64) -> Complex64 {
        let x3 = xi * xi * xi;
        let x6 = x3 * x3;
        x6 * x6 + self.b * x6 + ONE
    }

    pub fn dg(&self, xi: Complex64) -> Complex64 {
        let x5 = xi * xi * xi * xi * xi;
        12.0 * x5 * x5 * xi + 6.0 * self.b * x5
    }

    fn guard(&self, xi: Complex64) -> Result<(), WeierstrassError> {
        let (index, distance) = self.branch.nearest(xi);
        if distance < GUARD_RADIUS {
            return Err(WeierstrassError::NearBranchPoint {
                index,
                xi,
                distance,
            });
        }
        Ok(())
    }

    pub fn q(&self, xi: Complex64) -> Result<Complex64, WeierstrassError> {
        self.guard(xi)?;
        Ok(self.g_i / self.g(xi))
    }

    /// Coefficients `(p, q)` of the unit-phase cubic `R^3 + p R + q`.
    pub fn unit_coefficients(&self, xi: Complex64) -> (Complex64, Complex64) {
        let q = self.g_i / self.g(xi);
        (3.0 * q * xi * xi, -2.0 * q)
    }

    /// Roots of the unit-phase cubic, unguarded.
    ///
    /// Cardano with the numerically dominant radical, then two Newton
    /// corrections per root. Non-finite on a branch point.
    pub fn unit_roots(&self, xi: Complex64) -> [Complex64; 3] {
        self.unit_roots_given_g(xi, self.g(xi))
    }

    /// As [`Weierstrass::unit_roots`] with `g(xi)` supplied by the caller,
    /// for when it is known more accurately than direct evaluation gives.
    pub fn unit_roots_given_g(&self, xi: Complex64, g: Complex64) -> [Complex64; 3] {
        let qv = self.g_i / g;
        let x2 = xi * xi;
        let x6 = x2 * x2 * x2;
        let s = g.sqrt();
        let plus = ONE + x6 + s;
        let minus = ONE + x6 - s;
        let u3 = if plus.norm_sqr() >= minus.norm_sqr() {
            qv * plus / s
        } else {
            -qv * minus / s
        };
        let u = cbrt_upper(u3);
        let v = -qv * x2 / u;
        let p = 3.0 * qv * x2;
        let q = -2.0 * qv;
        let w2 = OMEGA * OMEGA;
        let mut roots = [u + v, OMEGA * u + w2 * v, w2 * u + OMEGA * v];
        for r in roots.iter_mut() {
            for _ in 0..2 {
                let f = *r * *r * *r + p * *r + q;
                let df = 3.0 * *r * *r + p;
                if df.norm_sqr() == 0.0 {
                    break;
                }
                let next = *r - f / df;
                if next.is_finite() {
                    let fn_ = next * next * next + p * next + q;
                    if fn_.norm_sqr() <= f.norm_sqr() {
                        *r = next;
                    }
                }
            }
        }
        roots
    }

    /// `dR/dxi` on the sheet carrying the unit-phase value `r`.
    pub fn unit_slope(&self, xi: Complex64, r: Complex64) -> Complex64 {
        self.unit_slope_given_g(xi, self.g(xi), r)
    }

    pub fn unit_slope_given_g(&self, xi: Complex64, g: Complex64, r: Complex64) -> Complex64 {
        let qv = self.g_i / g;
        let dq = -self.g_i * self.dg(xi) / (g * g);
        let x2 = xi * xi;
        let f_r = 3.0 * r * r + 3.0 * qv * x2;
        let f_xi = 3.0 * (dq * x2 + 2.0 * qv * xi) * r - 2.0 * dq;
        -f_xi / f_r
    }

    /// Residual of the unit-phase cubic, relative to its largest term.
    pub fn unit_residual(&self, xi: Complex64, r: Complex64) -> f64 {
        let (p, q) = self.unit_coefficients(xi);
        let terms = [r * r * r, p * r, q];
        let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
        (terms[0] + terms[1] + terms[2]).norm() / scale.max(f64::MIN_POSITIVE)
    }

    /// Taylor coefficients of `g` about branch point `index`, constant term
    /// dropped. Evaluating at an offset keeps full relative accuracy however
    /// close the offset is to zero.
    pub fn g_about(&self, index: usize) -> Result<ShiftedG, WeierstrassError> {
        let b = *self
            .branch
            .points
            .get(index)
            .ok_or(WeierstrassError::IndexOutOfRange(index))?;
        let mut mono = [Complex64::new(0.0, 0.0); 13];
        mono[0] = ONE;
        mono[6] = self.b;
        mono[12] = ONE;
        // Taylor shift by repeated synthetic division.
        for i in 0..12 {
            for j in (i..12).rev() {
                let next = mono[j + 1];
                mono[j] += b * next;
            }
        }
        let mut coeffs = mono;
        coeffs[0] = Complex64::new(0.0, 0.0);
        Ok(ShiftedG { center: b, coeffs })
    }

    /// Unit-phase value at `xi = 0` on the anchor sheet: `cbrt(2 g(i))` with
    /// the argument of `2 g(i)` taken in `[0, 2 pi)`.
    pub fn anchor_unit_root(&self) -> Complex64 {
        cbrt_upper(2.0 * self.g_i)
    }

    /// The finite unit-phase root at branch point `index`: `2 / (3 xi^2)`.
    pub fn unit_root_at_branch_point(&self, index: usize) -> Result<Complex64, WeierstrassError> {
        let p = self
            .branch
            .points
            .get(index)
            .ok_or(WeierstrassError::IndexOutOfRange(index))?;
        Ok(2.0 / (3.0 * p * p))
    }

    /// Roots in the `zeta` convention, guarded against branch points.
    pub fn solve(&self, xi: Complex64) -> Result<RootTriple, WeierstrassError> {
        self.guard(xi)?;
        let r = self.unit_roots(xi);
        Ok(RootTriple::from_array([
            self.zeta * r[0],
            self.zeta * r[1],
            self.zeta * r[2],
        ]))
    }

    /// Coefficients `(p, q)` of the monic cubic in the `zeta` convention.
    pub fn coefficients(&self, xi: Complex64) -> Result<(Complex64, Complex64), WeierstrassError> {
        let q = self.q(xi)?;
        let z2 = self.zeta * self.zeta;
        Ok((3.0 * z2 * q * xi * xi, -2.0 * z2 * self.zeta * q))
    }
}

pub fn branch_points(params: &FamilyParams) -> BranchPointSet {
    BranchPointSet::new(params)
}

/// `g(xi) = xi^12 + (A + 1/A) xi^6 + 1`.
pub fn poly_g(params: &FamilyParams, xi: Complex64) -> Complex64 {
    Weierstrass::new(*params).g(xi)
}

/// `Q(xi) = g(i) / g(xi)`.
pub fn poly_q(params: &FamilyParams, xi: Complex64) -> Result<Complex64, WeierstrassError> {
    Weierstrass::new(*params).q(xi)
}

pub fn solve_r(params: &FamilyParams, xi: Complex64) -> Result<RootTriple, WeierstrassError> {
    Weierstrass::new(*params).solve(xi)
}

/// Finite value of `R` at a branch point, `2 zeta / (3 xi_i^2)`.
///
/// This is the limit of the unbranched root; the sign is fixed by the cubic.
pub fn r_at_branch_point(params: &FamilyParams, index: usize) -> Result<Complex64, WeierstrassError> {
    let w = Weierstrass::new(*params);
    Ok(w.zeta() * w.unit_root_at_branch_point(index)?)
}

/// `K = -4 / ((1 + |xi|^2)^4 |R|^2)`.
pub fn gaussian_curvature(xi: Complex64, r_value: Complex64) -> Result<f64, WeierstrassError> {
    let r2 = r_value.norm_sqr();
    if r2 == 0.0 {
        return Err(WeierstrassError::ZeroValue);
    }
    if !r2.is_finite() {
        return Ok(0.0);
    }
    let s = 1.0 + xi.norm_sqr();
    Ok(-4.0 / (s.powi(4) * r2))
}

/// Discriminant `-4 p^3 - 27 q^2` of the monic cubic. Refused on a branch
/// point, where [`discriminant_cleared`] stays finite.
pub fn discriminant(params: &FamilyParams, xi: Complex64) -> Result<Complex64, WeierstrassError> {
    let (p, q) = Weierstrass::new(*params).coefficients(xi)?;
    Ok(-4.0 * p * p * p - 27.0 * q * q)
}

/// Discriminant of `g R^3 + 3 zeta^2 g(i) xi^2 R - 2 zeta^3 g(i)`, the cubic
/// with denominators cleared. Equals `g^4` times [`discriminant`].
pub fn discriminant_cleared(params: &FamilyParams, xi: Complex64) -> Complex64 {
    let w = Weierstrass::new(*params);
    let z = w.zeta();
    let a3 = w.g(xi);
    let a1 = 3.0 * z * z * w.g_at_i() * xi * xi;
    let a0 = -2.0 * z * z * z * w.g_at_i();
    -4.0 * a3 * a1 * a1 * a1 - 27.0 * a3 * a3 * a0 * a0
}
