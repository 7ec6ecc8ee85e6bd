//! Damped Gauss-Newton on the closing conditions, and family sweeps.

use std::f64::consts::{FRAC_PI_6, PI};
use std::io::{self, Write};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use tpms_contour::QuadOptions;
use tpms_weierstrass::FamilyParams;

use crate::problem::{Lattice, PeriodIntegrals};
use crate::PeriodError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Vary `(theta, delta)` at fixed `eta`.
    FixEta,
    /// Vary all three parameters; the step uses a pseudo-inverse since the
    /// system is rank-deficient along the family.
    Full3d,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Converged when every residual is below this.
    pub tol: f64,
    pub max_iter: usize,
    pub max_halvings: usize,
    /// Relative finite-difference step.
    pub fd_step: f64,
    pub quad: QuadOptions,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 30,
            max_halvings: 30,
            fd_step: 1e-6,
            quad: QuadOptions {
                abs_tol: 1e-12,
                ..QuadOptions::default()
            },
        }
    }
}

/// One solved member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodSolution {
    pub params: FamilyParams,
    pub residuals: [f64; 3],
    pub c: f64,
    pub a: f64,
    pub rho: f64,
    /// Inner branch point nearest the positive imaginary axis.
    pub omega1: (f64, f64),
    pub iterations: usize,
    pub strategy: Strategy,
}

impl PeriodSolution {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    pub fn omega1(&self) -> Complex64 {
        Complex64::new(self.omega1.0, self.omega1.1)
    }
}

fn max_abs(r: &[f64; 3]) -> f64 {
    r.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn in_domain(delta: f64, eta: f64) -> bool {
    delta > 0.0 && delta < 1.0 && eta > -FRAC_PI_6 && eta < FRAC_PI_6
}

struct Problem<'a> {
    opts: &'a SolverOptions,
    strategy: Strategy,
    eta: f64,
}

impl Problem<'_> {
    fn params(&self, u: &DVector<f64>) -> Option<FamilyParams> {
        let eta = if self.strategy == Strategy::Full3d { u[2] } else { self.eta };
        if !in_domain(u[1], eta) {
            return None;
        }
        FamilyParams::new(u[1], eta, u[0]).ok()
    }

    fn eval(&self, u: &DVector<f64>) -> Result<Option<[f64; 3]>, PeriodError> {
        match self.params(u) {
            None => Ok(None),
            Some(p) => Ok(Some(PeriodIntegrals::compute(&p, &self.opts.quad)?.residuals(u[0]))),
        }
    }

    fn jacobian(&self, u: &DVector<f64>, r: &[f64; 3]) -> Result<DMatrix<f64>, PeriodError> {
        let n = u.len();
        let mut jac = DMatrix::zeros(3, n);
        for k in 0..n {
            let mut h = self.opts.fd_step * u[k].abs().max(1e-2);
            let mut v = u.clone();
            v[k] += h;
            let rk = match self.eval(&v)? {
                Some(rk) => rk,
                None => {
                    h = -h;
                    v[k] = u[k] + h;
                    self.eval(&v)?.ok_or(PeriodError::DomainExit {
                        delta: v[1],
                        eta: if n == 3 { v[2] } else { self.eta },
                    })?
                }
            };
            for i in 0..3 {
                jac[(i, k)] = (rk[i] - r[i]) / h;
            }
        }
        Ok(jac)
    }
}

/// Solves the period problem from `initial`.
///
/// The Bonnet angle of the seed is replaced by the one that closes the `x`
/// and `y` conditions exactly, which leaves a single effective equation.
pub fn solve_member(initial: FamilyParams, strategy: Strategy) -> Result<PeriodSolution, PeriodError> {
    solve_member_with(initial, strategy, &SolverOptions::default())
}

pub fn solve_member_with(
    initial: FamilyParams,
    strategy: Strategy,
    opts: &SolverOptions,
) -> Result<PeriodSolution, PeriodError> {
    if !in_domain(initial.delta, initial.eta) {
        return Err(PeriodError::DomainExit {
            delta: initial.delta,
            eta: initial.eta,
        });
    }
    let theta0 = PeriodIntegrals::compute(&initial, &opts.quad)?.closing_angle();
    let problem = Problem {
        opts,
        strategy,
        eta: initial.eta,
    };
    let mut u = match strategy {
        Strategy::FixEta => DVector::from_vec(vec![theta0, initial.delta]),
        Strategy::Full3d => DVector::from_vec(vec![theta0, initial.delta, initial.eta]),
    };
    let mut r = problem.eval(&u)?.ok_or(PeriodError::DomainExit {
        delta: initial.delta,
        eta: initial.eta,
    })?;
    let mut iterations = 0;
    while max_abs(&r) >= opts.tol {
        if iterations == opts.max_iter {
            return Err(PeriodError::Diverged {
                iterations,
                residual: max_abs(&r),
            });
        }
        iterations += 1;
        let jac = problem.jacobian(&u, &r)?;
        let rhs = DVector::from_row_slice(&r);
        let svd = jac.svd(true, true);
        let cutoff = 1e-10 * svd.singular_values.max();
        let step = -svd.solve(&rhs, cutoff).map_err(|_| PeriodError::Diverged {
            iterations,
            residual: max_abs(&r),
        })?;
        let norm = |x: &[f64; 3]| x.iter().map(|v| v * v).sum::<f64>();
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let trial = &u + &step * alpha;
            if let Some(rt) = problem.eval(&trial)? {
                if norm(&rt) < norm(&r) {
                    accepted = Some((trial, rt));
                    break;
                }
            }
            alpha *= 0.5;
        }
        match accepted {
            Some((next, rn)) => {
                u = next;
                r = rn;
            }
            None => {
                return Err(PeriodError::Diverged {
                    iterations,
                    residual: max_abs(&r),
                })
            }
        }
    }
    let params = problem.params(&u).ok_or(PeriodError::DomainExit {
        delta: u[1],
        eta: initial.eta,
    })?;
    let params = params.with_theta(u[0].rem_euclid(2.0 * PI));
    let ints = PeriodIntegrals::compute(&params, &opts.quad)?;
    let lat: Lattice = ints.lattice(params.theta);
    if !(lat.c > 0.0 && lat.a > 0.0) {
        return Err(PeriodError::NonPositiveLattice { c: lat.c, a: lat.a });
    }
    let w = params.omega1();
    Ok(PeriodSolution {
        params,
        residuals: ints.residuals(params.theta),
        c: lat.c,
        a: lat.a,
        rho: lat.rho,
        omega1: (w.re, w.im),
        iterations,
        strategy,
    })
}

/// Vertical closing residual at the closing angle, as a function of `delta`.
fn reduced_residual(delta: f64, eta: f64, quad: &QuadOptions) -> Option<(f64, f64)> {
    let p = FamilyParams::new(delta, eta, 0.0).ok()?;
    let ints = PeriodIntegrals::compute(&p, quad).ok()?;
    let theta = ints.closing_angle();
    Some((ints.residuals(theta)[2], theta))
}

/// Brackets a member at `eta` by scanning `delta`, for when no warm start is
/// available. Returns a seed just inside the bracket.
pub fn seed_member(eta: f64, samples: usize) -> Option<FamilyParams> {
    let quad = QuadOptions::default();
    let grid: Vec<f64> = (0..samples)
        .map(|k| 0.003 + (0.9 - 0.003) * k as f64 / (samples - 1).max(1) as f64)
        .collect();
    let vals: Vec<Option<(f64, f64)>> = grid.iter().map(|&d| reduced_residual(d, eta, &quad)).collect();
    for k in 0..grid.len().saturating_sub(1) {
        let (Some((r0, t0)), Some((r1, t1))) = (vals[k], vals[k + 1]) else {
            continue;
        };
        // A jump of the closing angle by pi also flips the sign; skip it.
        let dt = (t1 - t0).rem_euclid(2.0 * PI);
        if r0 * r1 < 0.0 && dt.min(2.0 * PI - dt) < 1.0 {
            let mut lo = (grid[k], r0);
            let mut hi = (grid[k + 1], r1);
            for _ in 0..30 {
                let mid = 0.5 * (lo.0 + hi.0);
                let Some((rm, _)) = reduced_residual(mid, eta, &quad) else { break };
                if rm * lo.1 < 0.0 {
                    hi = (mid, rm);
                } else {
                    lo = (mid, rm);
                }
                if hi.0 - lo.0 < 1e-6 {
                    break;
                }
            }
            let d = 0.5 * (lo.0 + hi.0);
            let theta = reduced_residual(d, eta, &quad)?.1;
            return FamilyParams::new(d, eta, theta).ok();
        }
    }
    None
}

const ETA_LIMITS: (f64, f64) = (-0.48, 0.5);

fn warm_solve(eta: f64, warm: Option<&PeriodSolution>, opts: &SolverOptions) -> Result<PeriodSolution, PeriodError> {
    if let Some(w) = warm {
        if let Ok(seed) = FamilyParams::new(w.params.delta, eta, w.params.theta) {
            if let Ok(sol) = solve_member_with(seed, Strategy::FixEta, opts) {
                return Ok(sol);
            }
        }
    }
    let seed = seed_member(eta, 40).ok_or(PeriodError::Diverged {
        iterations: 0,
        residual: f64::NAN,
    })?;
    solve_member_with(seed, Strategy::FixEta, opts)
}

/// Member whose pitch is within `tol` of `rho`.
///
/// The pitch falls monotonically with `eta`, so the target is bracketed by
/// stepping `eta` from zero and then refined by regula falsi in `ln rho`.
pub fn solve_for_pitch(rho: f64, tol: f64, opts: &SolverOptions) -> Result<PeriodSolution, PeriodError> {
    let target = rho.ln();
    let err = |s: &PeriodSolution| s.rho.ln() - target;
    let mut a = warm_solve(0.0, None, opts)?;
    if (a.rho - rho).abs() <= tol {
        return Ok(a);
    }
    let dir = if err(&a) < 0.0 { -1.0 } else { 1.0 };
    let mut b = a;
    loop {
        let eta = b.params.eta + 0.05 * dir;
        if eta < ETA_LIMITS.0 || eta > ETA_LIMITS.1 {
            let (low, high) = if dir < 0.0 { (a.rho, b.rho) } else { (b.rho, a.rho) };
            return Err(PeriodError::PitchOutOfRange { rho, low, high });
        }
        let next = warm_solve(eta, Some(&b), opts)?;
        if (next.rho - rho).abs() <= tol {
            return Ok(next);
        }
        if err(&next).signum() != err(&b).signum() {
            a = b;
            b = next;
            break;
        }
        b = next;
    }
    // Illinois variant: halve the weight of an end that is kept twice.
    let (mut fa, mut fb) = (err(&a), err(&b));
    let mut side = 0;
    for _ in 0..60 {
        let eta = (a.params.eta * fb - b.params.eta * fa) / (fb - fa);
        let warm = if (eta - a.params.eta).abs() < (eta - b.params.eta).abs() { &a } else { &b };
        let c = warm_solve(eta, Some(warm), opts)?;
        if (c.rho - rho).abs() <= tol {
            return Ok(c);
        }
        let fc = err(&c);
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Err(PeriodError::Diverged {
        iterations: 60,
        residual: (b.rho - rho).abs(),
    })
}

/// Members solved along a grid of `eta`, sorted by pitch.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySweep {
    pub members: Vec<PeriodSolution>,
    pub failures: Vec<(f64, PeriodError)>,
    /// Pitch strictly increases with `Re(omega1)` across the members.
    pub monotone: bool,
}

/// Warm-started continuation across `eta_grid`; each member seeds the next.
pub fn sweep_family(eta_grid: &[f64]) -> FamilySweep {
    sweep_family_with(eta_grid, &SolverOptions::default())
}

pub fn sweep_family_with(eta_grid: &[f64], opts: &SolverOptions) -> FamilySweep {
    let mut members = Vec::new();
    let mut failures = Vec::new();
    let mut warm: Option<PeriodSolution> = None;
    for &eta in eta_grid {
        let attempt = |seed: FamilyParams| solve_member_with(seed, Strategy::FixEta, opts);
        let warm_result = warm.and_then(|w| FamilyParams::new(w.params.delta, eta, w.params.theta).ok().map(attempt));
        let result = match warm_result {
            Some(Ok(sol)) => Ok(sol),
            other => match seed_member(eta, 40) {
                Some(seed) => attempt(seed),
                None => match other {
                    Some(Err(e)) => Err(e),
                    _ => Err(PeriodError::Diverged {
                        iterations: 0,
                        residual: f64::NAN,
                    }),
                },
            },
        };
        match result {
            Ok(sol) => {
                warm = Some(sol);
                members.push(sol);
            }
            Err(e) => failures.push((eta, e)),
        }
    }
    members.sort_by(|a, b| a.rho.total_cmp(&b.rho));
    let monotone = members.windows(2).all(|w| w[1].omega1.0 > w[0].omega1.0);
    FamilySweep {
        members,
        failures,
        monotone,
    }
}

/// Columns `eta,delta,theta,c,a,rho,re_omega1,im_omega1,res1,res2,res3`.
pub fn write_family_csv<W: Write>(mut w: W, members: &[PeriodSolution]) -> io::Result<()> {
    writeln!(w, "eta,delta,theta,c,a,rho,re_omega1,im_omega1,res1,res2,res3")?;
    for m in members {
        let p = &m.params;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{:e},{:e},{:e}",
            p.eta, p.delta, p.theta, m.c, m.a, m.rho, m.omega1.0, m.omega1.1, m.residuals[0], m.residuals[1], m.residuals[2]
        )?;
    }
    Ok(())
}
