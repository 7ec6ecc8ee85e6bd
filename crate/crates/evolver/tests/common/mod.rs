#![allow(dead_code)]

use std::sync::OnceLock;

use tpms_evolver::{evolve, qtz, tube_mesh, EvolveOptions, Evolution};
use tpms_geometry::PeriodicMesh;
use tpms_mesh::Cell;
use tpms_period::{solve_for_pitch, PeriodSolution, SolverOptions};

pub const RADIUS: f64 = 0.12;
pub const SEGMENTS: usize = 24;

pub fn qtz_tube() -> &'static PeriodicMesh {
    static TUBE: OnceLock<PeriodicMesh> = OnceLock::new();
    TUBE.get_or_init(|| tube_mesh(&qtz(), RADIUS, SEGMENTS).unwrap())
}

pub fn evolved_qtz() -> &'static Evolution {
    static EVOLVED: OnceLock<Evolution> = OnceLock::new();
    EVOLVED.get_or_init(|| {
        let opts = EvolveOptions {
            max_iters: 2000,
            grad_tol: 1e-9,
            ..Default::default()
        };
        evolve(qtz_tube(), &opts).unwrap()
    })
}

pub fn member(rho: f64) -> PeriodSolution {
    solve_for_pitch(rho, 1e-6, &SolverOptions::default()).unwrap()
}

/// Analytic cell of the member at `rho`, scaled to `a = 1`.
pub fn analytic_cell(rho: f64, resolution: usize) -> PeriodicMesh {
    let cell = Cell::from_solution(&member(rho), resolution).unwrap();
    let mut pm = cell.mesh.clone();
    pm.scale(1.0 / cell.a);
    pm
}
