//! Tubes around periodic nets relaxed towards zero mean curvature.
//!
//! The energy is the discrete integral of `H^2` over a periodic triangle
//! mesh in a fixed lattice, minimised by nonlinear conjugate gradients.

pub mod compare;
pub mod energy;
mod error;
pub mod evolve;
pub mod net;
pub mod tube;

pub use compare::{closest_point_on_triangle, compare_surfaces, fit_to_lattice, translated, DistanceReport};
pub use energy::{energy, energy_and_gradient};
pub use error::EvolverError;
pub use evolve::{evolve, write_trace_csv, EnergySample, EvolveOptions, Evolution, StopReason};
pub use net::{load_net, qtz, qtz_source, NetEdge, NetSummary, PeriodicGraph};
pub use tube::{clearance, sleeve_layouts, tube_mesh, SleeveLayout};
