//! Closing the periods of the QTZ-QZD surfaces.
//!
//! A member closes when `x(i) = x(0)`, `y(1) = y(0)` and
//! `z(e^{-i pi/3}) = z(0)` on the anchor sheet. The first two fix the Bonnet
//! angle in closed form, so at fixed `eta` one real equation in `delta`
//! remains and the members form a curve.

mod error;
mod problem;
mod solver;

pub use error::PeriodError;
pub use problem::{
    constraint_paths, constraint_targets, lattice_params, path_to_i, residuals, Lattice, PeriodIntegrals,
};
pub use solver::{
    seed_member, solve_for_pitch, solve_member, solve_member_with, sweep_family, sweep_family_with,
    write_family_csv, FamilySweep, PeriodSolution, SolverOptions, Strategy,
};
