//! Polak-Ribiere conjugate gradients with Armijo backtracking.
//!
//! The energy is fourth order in the positions, so plain gradients are
//! dominated by mesh-scale wiggles. Search directions are smoothed by
//! `(I + tau L)^-2` with `L` the combinatorial Laplacian of the mesh, which
//! leaves the minimiser unchanged.

use std::io::{self, Write};

use serde::Serialize;
use tpms_geometry::{mean_edge_length, vertex_neighbours, PeriodicMesh, Vec3};

use crate::energy::energy_and_gradient;
use crate::EvolverError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub max_iters: usize,
    pub grad_tol: f64,
    /// Sufficient-decrease constant.
    pub armijo: f64,
    /// Iterations between steepest-descent restarts.
    pub restart: usize,
    /// Largest vertex move per step, relative to the mean edge length.
    pub max_move: f64,
    /// Halvings tried before giving up on a direction.
    pub backtracks: usize,
    /// Smoothing strength `tau` of the preconditioner; zero disables it.
    pub smoothing: f64,
    /// Fraction of the tangential vertex-averaging move applied at each restart.
    pub relax: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            grad_tol: 1e-6,
            armijo: 1e-4,
            restart: 50,
            max_move: 0.2,
            backtracks: 40,
            smoothing: 100.0,
            relax: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergySample {
    pub iter: usize,
    pub energy: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    GradientTolerance,
    IterationBudget,
    /// No step along steepest descent decreases the energy further.
    Stalled,
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub mesh: PeriodicMesh,
    /// One sample per accepted step, starting with the input.
    pub trace: Vec<EnergySample>,
    pub stop: StopReason,
    /// Trial steps refused because a triangle flipped.
    pub inverted_trials: usize,
}

impl Evolution {
    pub fn initial_energy(&self) -> f64 {
        self.trace[0].energy
    }

    pub fn final_energy(&self) -> f64 {
        self.trace.last().expect("trace is never empty").energy
    }

    /// Triangles whose area fell below `1e-8` of the mean. A neck that
    /// pinches off collapses its triangles while the connectivity, and so
    /// the combinatorial genus, stays intact.
    pub fn collapsed_triangles(&self) -> usize {
        let n = self.mesh.triangle_count();
        let mean = self.mesh.area() / n.max(1) as f64;
        (0..n).filter(|&t| self.mesh.triangle_area(t) < 1e-8 * mean).count()
    }
}

fn dot(a: &[Vec3], b: &[Vec3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

/// Solves `(I + tau L) x = b` by Jacobi-preconditioned conjugate gradients.
struct Smoother {
    adj: Vec<Vec<usize>>,
    tau: f64,
}

impl Smoother {
    fn apply_operator(&self, x: &[Vec3]) -> Vec<Vec3> {
        self.adj
            .iter()
            .enumerate()
            .map(|(v, nb)| {
                let lap: Vec3 = nb.iter().map(|&u| x[v] - x[u]).sum();
                x[v] + self.tau * lap
            })
            .collect()
    }

    fn solve(&self, b: &[Vec3]) -> Vec<Vec3> {
        if self.tau == 0.0 {
            return b.to_vec();
        }
        let diag: Vec<f64> = self.adj.iter().map(|nb| 1.0 + self.tau * nb.len() as f64).collect();
        let mut x: Vec<Vec3> = b.iter().zip(&diag).map(|(b, d)| b / *d).collect();
        let ax = self.apply_operator(&x);
        let mut r: Vec<Vec3> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let mut z: Vec<Vec3> = r.iter().zip(&diag).map(|(r, d)| r / *d).collect();
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        let target = 1e-20 * dot(b, b);
        for _ in 0..1000 {
            if dot(&r, &r) <= target {
                break;
            }
            let ap = self.apply_operator(&p);
            let step = rz / dot(&p, &ap);
            for i in 0..x.len() {
                x[i] += step * p[i];
                r[i] -= step * ap[i];
                z[i] = r[i] / diag[i];
            }
            let rz_next = dot(&r, &z);
            let beta = rz_next / rz;
            rz = rz_next;
            for i in 0..p.len() {
                p[i] = z[i] + beta * p[i];
            }
        }
        x
    }

    fn precondition(&self, g: &[Vec3]) -> Vec<Vec3> {
        self.solve(&self.solve(g))
    }
}

fn norm(v: &[Vec3]) -> f64 {
    v.iter().map(|x| x.norm_squared()).sum::<f64>().sqrt()
}

fn normals(pm: &PeriodicMesh) -> Vec<Vec3> {
    (0..pm.triangle_count()).map(|t| pm.triangle_normal(t)).collect()
}

/// First triangle whose normal turned by more than a right angle.
fn inverted(before: &[Vec3], pm: &PeriodicMesh) -> Option<usize> {
    (0..pm.triangle_count()).find(|&t| before[t].dot(&pm.triangle_normal(t)) <= 0.0)
}

fn displaced(pm: &PeriodicMesh, dir: &[Vec3], alpha: f64) -> PeriodicMesh {
    let mut out = pm.clone();
    for (x, d) in out.mesh.vertices.iter_mut().zip(dir) {
        *x += alpha * d;
    }
    out
}

/// Moves every vertex towards the area-weighted centroid of its triangles,
/// within its tangent plane.
fn relaxed(pm: &PeriodicMesh, weight: f64) -> PeriodicMesh {
    let n = pm.vertex_count();
    let mut pull = vec![Vec3::zeros(); n];
    let mut mass = vec![0.0; n];
    let mut normal = vec![Vec3::zeros(); n];
    for t in 0..pm.triangle_count() {
        let p = pm.triangle_points(t);
        let cross = (p[1] - p[0]).cross(&(p[2] - p[0]));
        let area = 0.5 * cross.norm();
        let centroid = (p[0] + p[1] + p[2]) / 3.0;
        for (k, &v) in pm.mesh.triangles[t].iter().enumerate() {
            pull[v] += area * (centroid - p[k]);
            mass[v] += area;
            normal[v] += cross;
        }
    }
    let mut out = pm.clone();
    for v in 0..n {
        let nv = normal[v].normalize();
        let d = pull[v] / mass[v];
        out.mesh.vertices[v] += weight * (d - nv * nv.dot(&d));
    }
    out
}

/// Minimises the energy over vertex positions with the lattice held fixed.
pub fn evolve(mesh: &PeriodicMesh, opts: &EvolveOptions) -> Result<Evolution, EvolverError> {
    let mut pm = mesh.clone();
    let (mut f, mut g) = energy_and_gradient(&pm);
    let mut trace = vec![EnergySample {
        iter: 0,
        energy: f,
        grad_norm: norm(&g),
    }];
    let smoother = Smoother {
        adj: vertex_neighbours(&pm),
        tau: opts.smoothing,
    };
    let mut y = smoother.precondition(&g);
    let mut dir: Vec<Vec3> = y.iter().map(|x| -x).collect();
    let mut since_restart = 0;
    let mut alpha = f64::NAN;
    let mut inverted_trials = 0;
    let mut stop = StopReason::IterationBudget;

    for iter in 1..=opts.max_iters {
        if trace.last().unwrap().grad_norm < opts.grad_tol {
            stop = StopReason::GradientTolerance;
            break;
        }
        let edge = mean_edge_length(&pm);
        let max_dir = dir.iter().map(|d| d.norm()).fold(0.0, f64::max);
        let cap = opts.max_move * edge / max_dir;
        alpha = if alpha.is_finite() { (2.0 * alpha).min(cap) } else { 0.25 * cap };
        let before = normals(&pm);
        let slope: f64 = g.iter().zip(&dir).map(|(g, d)| g.dot(d)).sum();

        let mut accepted = None;
        let mut last_flip = None;
        for _ in 0..opts.backtracks {
            let trial = displaced(&pm, &dir, alpha);
            if let Some(t) = inverted(&before, &trial) {
                inverted_trials += 1;
                last_flip = Some(t);
                alpha *= 0.5;
                continue;
            }
            let (ft, gt) = energy_and_gradient(&trial);
            if ft <= f + opts.armijo * alpha * slope {
                accepted = Some((trial, ft, gt));
                break;
            }
            alpha *= 0.5;
        }

        let Some((trial, ft, gt)) = accepted else {
            let steepest = since_restart == 0;
            if steepest {
                if let Some(t) = last_flip {
                    return Err(EvolverError::Inversion { triangle: t });
                }
                stop = StopReason::Stalled;
                break;
            }
            dir = y.iter().map(|x| -x).collect();
            since_restart = 0;
            alpha = f64::NAN;
            continue;
        };

        // Preconditioned Polak-Ribiere with the non-negative clamp.
        let yt = smoother.precondition(&gt);
        let num: f64 = gt.iter().zip(yt.iter().zip(&y)).map(|(g, (n, o))| g.dot(&(n - o))).sum();
        let mut beta = (num / dot(&g, &y)).max(0.0);
        since_restart += 1;
        if since_restart >= opts.restart {
            beta = 0.0;
        }
        let mut next: Vec<Vec3> = yt.iter().zip(&dir).map(|(y, d)| -y + beta * d).collect();
        if dot(&gt, &next) >= 0.0 {
            next = yt.iter().map(|x| -x).collect();
            beta = 0.0;
        }
        let (mut trial, mut ft, mut gt, mut yt, mut next) = (trial, ft, gt, yt, next);
        if beta == 0.0 {
            since_restart = 0;
            if opts.relax > 0.0 {
                let moved = relaxed(&trial, opts.relax);
                if inverted(&normals(&trial), &moved).is_none() {
                    let (fm, gm) = energy_and_gradient(&moved);
                    if fm <= ft {
                        yt = smoother.precondition(&gm);
                        next = yt.iter().map(|x| -x).collect();
                        trial = moved;
                        ft = fm;
                        gt = gm;
                    }
                }
            }
        }
        pm = trial;
        f = ft;
        g = gt;
        y = yt;
        dir = next;
        trace.push(EnergySample {
            iter,
            energy: f,
            grad_norm: norm(&g),
        });
    }
    if stop == StopReason::IterationBudget && trace.last().unwrap().grad_norm < opts.grad_tol {
        stop = StopReason::GradientTolerance;
    }
    Ok(Evolution {
        mesh: pm,
        trace,
        stop,
        inverted_trials,
    })
}

/// Columns `iter,f,grad_norm`.
pub fn write_trace_csv<W: Write>(mut w: W, trace: &[EnergySample]) -> io::Result<()> {
    writeln!(w, "iter,f,grad_norm")?;
    for s in trace {
        writeln!(w, "{},{:e},{:e}", s.iter, s.energy, s.grad_norm)?;
    }
    Ok(())
}
