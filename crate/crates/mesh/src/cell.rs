//! The translational unit cell as a periodic mesh in the standard setting.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix3, Vector2};
use num_complex::Complex64;
use tpms_contour::QuadOptions;
use tpms_geometry::{Lattice, PeriodicMesh, TriMesh};
use tpms_period::PeriodSolution;
use tpms_weierstrass::FamilyParams;

use crate::lift::{LiftedSurface, Vec3};
use crate::sphere::Key;
use crate::symmetry::{group_generators, procrustes, rot_z, SymOp};
use crate::MeshError;

/// Closure tolerance relative to `a`.
pub const CLOSURE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellOptions {
    pub resolution: usize,
    pub quad: QuadOptions,
}

impl Default for CellOptions {
    fn default() -> Self {
        Self {
            resolution: 16,
            quad: QuadOptions::default(),
        }
    }
}

/// Rigid motion from tree coordinates to the standard setting:
/// `aligned = rotation * raw - shift`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alignment {
    pub rotation: Matrix3<f64>,
    pub shift: Vec3,
    /// Angle of a shortest horizontal period in tree coordinates.
    pub beta: f64,
    /// `z` was reversed to turn a 6_4 screw into 6_2.
    pub mirrored: bool,
}

impl Alignment {
    pub fn apply(&self, p: &Vec3) -> Vec3 {
        self.rotation * p - self.shift
    }

    /// An operation given in tree coordinates, expressed in aligned ones.
    pub fn conjugate(&self, op: &SymOp) -> SymOp {
        let rot = self.rotation * op.rot * self.rotation.transpose();
        SymOp {
            rot,
            trans: self.rotation * op.trans + rot * self.shift - self.shift,
        }
    }
}

/// Sphere-level symmetries used to fit the space group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereOp {
    /// `xi -> e^{i pi/3} xi`.
    Rotation,
    /// `xi -> 1/xi`.
    Flip,
}

impl SphereOp {
    fn name(self) -> &'static str {
        match self {
            SphereOp::Rotation => "six-fold rotation",
            SphereOp::Flip => "two-fold flip",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Cell {
    pub surface: LiftedSurface,
    pub theta: f64,
    pub c: f64,
    pub a: f64,
    pub alignment: Alignment,
    /// Vertex `i` is lifted vertex `i`; triangles follow the Gauss normal.
    pub mesh: PeriodicMesh,
    /// Largest deviation of the fitted operations from mapping the cell
    /// onto itself modulo the lattice.
    pub invariance_residual: f64,
}

fn lifted_vertex_map(s: &LiftedSurface, op: SphereOp) -> Result<Vec<usize>, MeshError> {
    let n = s.sphere.n;
    let circle = 6 * n;
    let shift = |c: u8, s: usize| match (op, c) {
        (SphereOp::Rotation, 0) => (s + 1) % 6,
        (SphereOp::Rotation, _) => (s + 5) % 6,
        (SphereOp::Flip, _) => s,
    };
    let chart = |c: u8| match op {
        SphereOp::Rotation => c,
        SphereOp::Flip => 1 - c,
    };
    let map_key = |k: Key| -> Key {
        match k {
            Key::Center(c) => Key::Center(chart(c)),
            Key::Branch(c, i) => Key::Branch(chart(c), shift(c, i)),
            Key::Ray(c, r, i) => Key::Ray(chart(c), shift(c, r), i),
            Key::Circle(k) => Key::Circle(match op {
                SphereOp::Rotation => (k + n) % circle,
                SphereOp::Flip => (circle - k) % circle,
            }),
            Key::Side(c, i, corner, j) => Key::Side(chart(c), shift(c, i), corner, j),
            Key::Inner(c, i, sub, j, k) => Key::Inner(chart(c), shift(c, i), sub, j, k),
        }
    };
    let rot_plane = Complex64::from_polar(1.0, -2.0 * PI / 3.0);
    let mut out = vec![0; s.vertices.len()];
    for (i, lv) in s.vertices.iter().enumerate() {
        let sv = &s.sphere.vertices[lv.sphere];
        let target = s
            .sphere
            .lookup(map_key(s.sphere.key(lv.sphere)))
            .expect("triangulation is symmetric");
        let base = s.first[target];
        out[i] = match lv.root {
            None => base + 1,
            Some(_) if sv.branch.is_some() => base,
            Some(r) => {
                let mapped = match (op, sv.on_circle, sv.chart) {
                    (SphereOp::Rotation, _, tpms_contour::Chart::Plane) => r * rot_plane,
                    (SphereOp::Rotation, _, tpms_contour::Chart::Inverted) => r * rot_plane.conj(),
                    (SphereOp::Flip, true, _) => {
                        let z2 = sv.z * sv.z;
                        r * z2 * z2
                    }
                    (SphereOp::Flip, false, _) => r,
                };
                let (k, d) = (0..3)
                    .map(|k| (k, (s.vertices[base + k].root.unwrap_or_default() - mapped).norm()))
                    .min_by(|x, y| x.1.total_cmp(&y.1))
                    .expect("three roots");
                if d > 1e-6 * (1.0 + mapped.norm()) {
                    return Err(MeshError::RootMismatch {
                        at: s.sphere.vertices[target].xi(),
                        distance: d,
                    });
                }
                base + k
            }
        };
    }
    Ok(out)
}

/// Fits the isometry induced by `map` on tree positions `x`, and its
/// invariance residual modulo `lattice`.
fn fit_op(s: &LiftedSurface, theta: f64, x: &[Vec3], map: &[usize], lattice: &Lattice) -> (SymOp, f64) {
    let stride = (s.edges.len() / 4000).max(1);
    let pairs: Vec<(Vec3, Vec3)> = s
        .edges
        .iter()
        .step_by(stride)
        .filter_map(|e| {
            let d = s.displacement(e.from, e.to, theta)?;
            let d2 = s.displacement(map[e.from], map[e.to], theta)?;
            Some((d, d2))
        })
        .collect();
    let rot = procrustes(&pairs);
    let trans = x[map[0]] - rot * x[0];
    let op = SymOp { rot, trans };
    let residual = (0..x.len())
        .map(|v| lattice.nearest_vector(&(x[map[v]] - op.apply(&x[v]))).1)
        .fold(0.0, f64::max);
    (op, residual)
}

fn detect_lattice(mismatch: &[Vec3], a: f64, c: f64) -> Result<(Lattice, f64), MeshError> {
    let tol = 1e-4 * a;
    let mut beta = None;
    for m in mismatch {
        let h = (m.x * m.x + m.y * m.y).sqrt();
        let angle = m.y.atan2(m.x);
        if (h - a).abs() < tol {
            beta = Some(angle);
            break;
        }
        if (h - 3f64.sqrt() * a).abs() < tol {
            beta = Some(angle - PI / 6.0);
            break;
        }
    }
    let beta = match beta {
        Some(b) => b.rem_euclid(PI / 3.0),
        None if mismatch.iter().all(|m| m.x.hypot(m.y) < tol) => 0.0,
        None => return Err(MeshError::LatticeNotFound { a }),
    };
    let hex = Lattice::hexagonal(a, c);
    let r = rot_z(beta);
    Ok((
        Lattice {
            vectors: hex.vectors.map(|v| r * v),
        },
        beta,
    ))
}

impl Cell {
    pub fn from_solution(sol: &PeriodSolution, resolution: usize) -> Result<Self, MeshError> {
        Self::build(
            sol.params,
            sol.c,
            sol.a,
            &CellOptions {
                resolution,
                ..CellOptions::default()
            },
        )
    }

    /// Lifts, places and aligns the cell of a solved member with periods
    /// `c`, `a`.
    pub fn build(params: FamilyParams, c: f64, a: f64, opts: &CellOptions) -> Result<Self, MeshError> {
        let surface = LiftedSurface::build(params, opts.resolution, &opts.quad)?;
        Self::from_surface(surface, params.theta, c, a)
    }

    pub fn from_surface(surface: LiftedSurface, theta: f64, c: f64, a: f64) -> Result<Self, MeshError> {
        let x = surface.tree_positions(theta, surface.anchor());
        let tol = CLOSURE_TOL * a;

        // Unwrapped corners relative to corner 0; the mismatches are periods.
        let mut corners = Vec::with_capacity(surface.triangles.len());
        let mut mismatch = Vec::new();
        for t in &surface.triangles {
            let y0 = x[t[0]];
            let y1 = y0 + surface.displacement(t[0], t[1], theta).expect("edge");
            let y2 = y0 + surface.displacement(t[0], t[2], theta).expect("edge");
            for (y, v) in [(y1, t[1]), (y2, t[2])] {
                let m = y - x[v];
                if m.norm() > tol {
                    mismatch.push(m);
                }
            }
            corners.push([y0, y1, y2]);
        }
        let (raw_lattice, beta) = detect_lattice(&mismatch, a, c)?;
        let mut offsets = Vec::with_capacity(corners.len());
        let mut worst: f64 = 0.0;
        for (t, ys) in surface.triangles.iter().zip(&corners) {
            let mut o = [[0i32; 3]; 3];
            for k in 0..3 {
                let (off, d) = raw_lattice.nearest_vector(&(ys[k] - x[t[k]]));
                worst = worst.max(d);
                o[k] = off;
            }
            offsets.push(o);
        }
        if worst > tol {
            return Err(MeshError::NotClosed { residual: worst, tol });
        }

        // Orient triangles along the Gauss normal.
        let mut triangles = surface.triangles.clone();
        let orientation: f64 = triangles
            .iter()
            .zip(&corners)
            .map(|(t, y)| (y[1] - y[0]).cross(&(y[2] - y[0])).dot(&surface.gauss_normal(t[0])))
            .sum();
        if orientation < 0.0 {
            for (t, o) in triangles.iter_mut().zip(offsets.iter_mut()) {
                t.swap(1, 2);
                o.swap(1, 2);
            }
        }

        // Symmetry operations in tree coordinates.
        let rot_map = lifted_vertex_map(&surface, SphereOp::Rotation)?;
        let flip_map = lifted_vertex_map(&surface, SphereOp::Flip)?;
        let (rot_op, r1) = fit_op(&surface, theta, &x, &rot_map, &raw_lattice);
        let (flip_op, r2) = fit_op(&surface, theta, &x, &flip_map, &raw_lattice);
        for (op, r) in [(SphereOp::Rotation, r1), (SphereOp::Flip, r2)] {
            if r > tol * 10.0 {
                return Err(MeshError::Symmetry {
                    name: op.name(),
                    residual: r,
                });
            }
        }

        // Rotate the lattice onto the standard axes.
        let mut align = Alignment {
            rotation: rot_z(-beta),
            shift: Vec3::zeros(),
            beta,
            mirrored: false,
        };
        let mut six = align.conjugate(&rot_op);
        if (six.rot - rot_z(PI / 3.0)).abs().max() > 1e-6 {
            six = six.inverse();
        }
        if (six.rot - rot_z(PI / 3.0)).abs().max() > 1e-6 {
            return Err(MeshError::Symmetry {
                name: SphereOp::Rotation.name(),
                residual: (six.rot - rot_z(PI / 3.0)).abs().max(),
            });
        }
        let screw = six.trans.z.rem_euclid(c);
        if (screw - 2.0 * c / 3.0).abs() < 1e-4 * c {
            align.rotation = Matrix3::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0) * align.rotation;
            align.mirrored = true;
            six = align.conjugate(&rot_op);
            if (six.rot - rot_z(PI / 3.0)).abs().max() > 1e-6 {
                six = six.inverse();
            }
        } else if (screw - c / 3.0).abs() > 1e-4 * c {
            return Err(MeshError::Symmetry {
                name: "six-fold screw",
                residual: screw,
            });
        }
        // Put the screw axis through the origin.
        let m2 = Matrix2::new(1.0 - six.rot[(0, 0)], -six.rot[(0, 1)], -six.rot[(1, 0)], 1.0 - six.rot[(1, 1)]);
        let pxy = m2.try_inverse().expect("rotation by 60 degrees") * Vector2::new(six.trans.x, six.trans.y);
        align.shift = Vec3::new(pxy.x, pxy.y, 0.0);
        // Put a two-fold axis along x at z = 0.
        let six_a = align.conjugate(&rot_op);
        let flip_a = align.conjugate(&flip_op);
        let target = Matrix3::new(1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0);
        let mut two = None;
        let mut g = flip_a;
        for _ in 0..6 {
            if (g.rot - target).abs().max() < 1e-6 {
                two = Some(g);
                break;
            }
            g = six_a.compose(&g);
        }
        let two = two.ok_or(MeshError::Symmetry {
            name: SphereOp::Flip.name(),
            residual: f64::NAN,
        })?;
        align.shift.z = (two.trans.z / 2.0).rem_euclid(c / 2.0);

        // Check the fitted group against the standard operations.
        let lattice = Lattice::hexagonal(a, c);
        let standard = group_generators(c, a);
        let (six_f, flip_f) = (align.conjugate(&rot_op), align.conjugate(&flip_op));
        let mut fitted = Vec::new();
        let mut g = SymOp::identity();
        for _ in 0..6 {
            fitted.push(g);
            fitted.push(g.compose(&flip_f));
            g = six_f.compose(&g);
        }
        for op in &fitted {
            if !standard.iter().any(|s| s.matches(op, &lattice, 10.0 * tol)) {
                return Err(MeshError::Symmetry {
                    name: "space group",
                    residual: f64::NAN,
                });
            }
        }

        let vertices: Vec<Vec3> = x.iter().map(|p| align.apply(p)).collect();
        if align.mirrored {
            // The c vector changed sign.
            for o in offsets.iter_mut() {
                for k in 0..3 {
                    o[k][2] = -o[k][2];
                }
            }
            // Keep triangle normals along the mirrored Gauss normal field.
            for (t, o) in triangles.iter_mut().zip(offsets.iter_mut()) {
                t.swap(1, 2);
                o.swap(1, 2);
            }
        }
        // Offsets were measured in the rotated basis, which the alignment
        // takes to the standard one.
        let mut mesh = TriMesh::new(vertices, triangles);
        mesh.vertex_params = Some(
            surface
                .vertices
                .iter()
                .map(|lv| surface.sphere.vertices[lv.sphere].xi())
                .collect(),
        );
        let mut pm = PeriodicMesh::periodic(mesh, lattice, offsets);
        pm.normalise_offsets();
        Ok(Self {
            surface,
            theta,
            c,
            a,
            alignment: align,
            mesh: pm,
            invariance_residual: r1.max(r2),
        })
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::hexagonal(self.a, self.c)
    }

    pub fn rho(&self) -> f64 {
        self.c / self.a
    }

    /// Analytic Gauss curvature per vertex.
    pub fn analytic_curvature(&self) -> Vec<f64> {
        (0..self.surface.vertices.len())
            .map(|v| self.surface.analytic_curvature(v))
            .collect()
    }

    /// Gauss normal of the surface in aligned coordinates, oriented like the
    /// mesh triangles.
    pub fn gauss_normal(&self, v: usize) -> Vec3 {
        let r = self.alignment.rotation;
        r.determinant() * (r * self.surface.gauss_normal(v))
    }

    /// Parameter-plane point whose Gauss normal is the aligned normal `n`.
    pub fn param_of_normal(&self, n: &Vec3) -> Complex64 {
        let r = self.alignment.rotation;
        let raw = r.determinant() * (r.transpose() * n);
        Complex64::new(raw.x, raw.y) / (1.0 - raw.z)
    }
}
