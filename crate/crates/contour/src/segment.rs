//! One straight segment: root continuation interleaved with GK15 panels.

use num_complex::Complex64;
use tpms_weierstrass::{ShiftedG, Weierstrass, GUARD_RADIUS};

use crate::gk15;
use crate::ContourError;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Coordinate patch on the Riemann sphere.
///
/// `Inverted` uses `w = 1/xi` with `R~(w) = xi^4 R(xi)`, which solves the same
/// cubic in `w`. Branch points have the same coordinates in both charts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Chart {
    #[default]
    Plane,
    Inverted,
}

impl Chart {
    /// The three Weierstrass-Enneper integrands at chart coordinate `z`.
    pub fn forms(self, z: Complex64, r: Complex64) -> [Complex64; 3] {
        let z2 = z * z;
        match self {
            Chart::Plane => [(1.0 - z2) * r, I * (1.0 + z2) * r, 2.0 * z * r],
            Chart::Inverted => [(1.0 - z2) * r, -I * (1.0 + z2) * r, -2.0 * z * r],
        }
    }

    /// Maps a plane coordinate into this chart.
    pub fn coordinate(self, xi: Complex64) -> Complex64 {
        match self {
            Chart::Plane => xi,
            Chart::Inverted => xi.inv(),
        }
    }

    /// Converts a unit-phase root at plane coordinate `xi` into this chart.
    pub fn root(self, xi: Complex64, r: Complex64) -> Complex64 {
        match self {
            Chart::Plane => r,
            Chart::Inverted => {
                let x2 = xi * xi;
                r * x2 * x2
            }
        }
    }
}

/// Step and tolerance settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Absolute error budget per component over a whole segment.
    pub abs_tol: f64,
    /// A node is accepted when the chosen root is this many times closer
    /// than the runner-up.
    pub separation_ratio: f64,
    /// Roots within this relative distance are treated as one.
    pub coincide_tol: f64,
    /// First panel width as a fraction of the segment.
    pub initial_step: f64,
    pub min_step: f64,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            separation_ratio: 0.2,
            coincide_tol: 1e-7,
            initial_step: 0.25,
            min_step: 1e-12,
            max_panels: 200_000,
        }
    }
}

/// A straight segment in one chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub chart: Chart,
    pub from: Complex64,
    pub to: Complex64,
    /// Set when `to` is this branch point. The segment is then parametrised
    /// as `to + (from - to)(1 - t)^2`, which makes the integrand analytic in
    /// `t` on every sheet.
    pub end_branch: Option<usize>,
}

impl Segment {
    pub fn new(chart: Chart, from: Complex64, to: Complex64) -> Self {
        Self {
            chart,
            from,
            to,
            end_branch: None,
        }
    }

    pub fn to_branch_point(chart: Chart, from: Complex64, f: &Weierstrass, index: usize) -> Self {
        Self {
            chart,
            from,
            to: f.branch_points().points[index],
            end_branch: Some(index),
        }
    }

    /// Point, derivative in `t`, and `g` there.
    fn at(&self, t: f64, f: &Weierstrass, shifted: Option<&ShiftedG>) -> Node {
        let d = self.to - self.from;
        match shifted {
            None => {
                let z = self.from + d * t;
                Node {
                    t,
                    z,
                    dz: d,
                    g: f.g(z),
                    scale: None,
                }
            }
            Some(sg) => {
                let s = 1.0 - t;
                let offset = -d * s * s;
                Node {
                    t,
                    z: self.to + offset,
                    dz: 2.0 * d * s,
                    g: sg.eval(offset),
                    scale: Some(s),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Node {
    t: f64,
    z: Complex64,
    dz: Complex64,
    g: Complex64,
    /// `1 - t` when the branched roots grow like `1 / (1 - t)`; prediction
    /// then runs on `r (1 - t)`, which stays analytic.
    scale: Option<f64>,
}

/// Integrals over one segment, in the unit phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentIntegral {
    pub phi: [Complex64; 3],
    /// Continued root at the end, `None` on a sheet that blows up at an end
    /// branch point.
    pub end_root: Option<Complex64>,
    pub error: f64,
    pub panels: usize,
}

struct Tracker<'a> {
    f: &'a Weierstrass,
    opts: &'a QuadOptions,
}

impl Tracker<'_> {
    /// Picks the root continuing `prev` from `from` to `to`.
    fn step(&self, from: &Node, prev: Complex64, to: &Node) -> Result<Complex64, (Complex64, f64)> {
        let slope = self.f.unit_slope_given_g(from.z, from.g, prev) * from.dz;
        let dt = to.t - from.t;
        let pred = match (from.scale, to.scale) {
            (Some(s0), Some(s1)) if s1 > 0.0 => (prev * s0 + (slope * s0 - prev) * dt) / s1,
            _ => prev + slope * dt,
        };
        let roots = self.f.unit_roots_given_g(to.z, to.g);
        let mut idx = [0usize, 1, 2];
        let dist = roots.map(|r| (r - pred).norm());
        idx.sort_by(|&a, &b| dist[a].total_cmp(&dist[b]));
        let (best, second) = (roots[idx[0]], roots[idx[1]]);
        let gap = (best - second).norm();
        if !best.is_finite() {
            return Err((to.z, 0.0));
        }
        if dist[idx[0]] <= self.opts.separation_ratio * dist[idx[1]]
            || gap <= self.opts.coincide_tol * best.norm()
        {
            Ok(best)
        } else {
            Err((to.z, gap))
        }
    }
}

/// Continues `start` (unit phase, chart convention) along `seg` and
/// integrates the three forms.
pub fn integrate_segment(
    f: &Weierstrass,
    seg: &Segment,
    start: Complex64,
    opts: &QuadOptions,
) -> Result<SegmentIntegral, ContourError> {
    let shifted = match seg.end_branch {
        Some(index) => {
            let sg = f.g_about(index)?;
            if (sg.center - seg.to).norm() > 1e-12 * (1.0 + sg.center.norm()) {
                return Err(ContourError::EndpointMismatch { at: seg.to, index });
            }
            Some(sg)
        }
        None => None,
    };
    let sg = shifted.as_ref();
    let mut out = SegmentIntegral {
        phi: [Complex64::new(0.0, 0.0); 3],
        end_root: Some(start),
        error: 0.0,
        panels: 0,
    };
    if seg.from == seg.to {
        return Ok(out);
    }
    let tracker = Tracker { f, opts };
    let nodes = gk15::nodes();
    let mut t = 0.0;
    let mut h = opts.initial_step;
    let mut r = start;
    let mut node_prev = seg.at(0.0, f, sg);
    let mut last = start;
    let mut attempts = 0usize;
    let mut worst = 0.0f64;
    while t < 1.0 {
        attempts += 1;
        if attempts > opts.max_panels {
            return Err(ContourError::ToleranceNotMet {
                panels: out.panels,
                estimate: worst,
            });
        }
        h = h.min(1.0 - t);
        let finishing = t + h >= 1.0;
        let singular_end = finishing && seg.end_branch.is_some();
        let mut kron = [Complex64::new(0.0, 0.0); 3];
        let mut gauss = [Complex64::new(0.0, 0.0); 3];
        let mut np = node_prev;
        let mut rp = r;
        let mut failed = None;
        for &(x, wk, wg) in nodes.iter() {
            let tau = t + 0.5 * h * (1.0 + x);
            let node = seg.at(tau, f, sg);
            if sg.is_none() && f.branch_points().nearest(node.z).1 < GUARD_RADIUS {
                return Err(ContourError::RootCollision {
                    at: node.z,
                    separation: 0.0,
                });
            }
            match tracker.step(&np, rp, &node) {
                Ok(root) => {
                    let vals = seg.chart.forms(node.z, root);
                    for k in 0..3 {
                        let v = vals[k] * node.dz;
                        kron[k] += v * wk;
                        gauss[k] += v * wg;
                    }
                    np = node;
                    rp = root;
                }
                Err(e) => {
                    failed = Some(e);
                    break;
                }
            }
        }
        let mut end = rp;
        let mut node_end = np;
        if failed.is_none() && !singular_end {
            let mut node = seg.at(if finishing { 1.0 } else { t + h }, f, sg);
            if finishing {
                node.t = 1.0;
                node.z = seg.to;
                node.g = f.g(seg.to);
            }
            match tracker.step(&np, rp, &node) {
                Ok(root) => {
                    end = root;
                    node_end = node;
                }
                Err(e) => failed = Some(e),
            }
        }
        if let Some((at, separation)) = failed {
            h *= 0.5;
            if h < opts.min_step {
                return Err(ContourError::RootCollision { at, separation });
            }
            continue;
        }
        let scale = 0.5 * h;
        let mut err = 0.0f64;
        let mut size = 0.0f64;
        for k in 0..3 {
            err = err.max(((kron[k] - gauss[k]) * scale).norm());
            size = size.max((kron[k] * scale).norm());
        }
        let allowed = (opts.abs_tol * h).max(4.0 * f64::EPSILON * size);
        if err > allowed {
            h *= 0.5;
            worst = worst.max(err);
            if h < opts.min_step {
                return Err(ContourError::ToleranceNotMet {
                    panels: out.panels,
                    estimate: worst,
                });
            }
            continue;
        }
        for k in 0..3 {
            out.phi[k] += kron[k] * scale;
        }
        out.error += err;
        out.panels += 1;
        t = if finishing { 1.0 } else { t + h };
        r = end;
        node_prev = node_end;
        last = rp;
        h *= 1.5;
    }
    out.end_root = match seg.end_branch {
        None => Some(r),
        Some(index) => {
            let finite = f.unit_root_at_branch_point(index)?;
            let roots = f.unit_roots_given_g(node_prev.z, node_prev.g);
            let nearest = roots
                .iter()
                .min_by(|a, b| (**a - finite).norm().total_cmp(&(**b - finite).norm()))
                .copied()
                .unwrap_or(finite);
            if (last - nearest).norm() <= 1e-9 * (1.0 + nearest.norm()) {
                Some(finite)
            } else {
                None
            }
        }
    };
    Ok(out)
}
