//! Meshes of the surfaces: the lifted translational cell, its fundamental
//! patch and symmetry replication, and the Scherk limits.

pub mod cell;
mod error;
pub mod lift;
pub mod param;
pub mod patch;
pub mod scherk;
pub mod sphere;
pub mod symmetry;

pub use cell::{Alignment, Cell, CellOptions};
pub use error::MeshError;
pub use lift::{LiftedEdge, LiftedSurface, LiftedVertex};
pub use param::{sample_semicircle, ParamMesh};
pub use patch::{default_weld_tol, invariance_gap, replicate_and_weld, Patch, SeamReport};
pub use scherk::{scherk_domain, scherk_mesh, scherk_poles};
pub use sphere::{rows_for, SphereMesh, SphereVertex};
pub use symmetry::{group_generators, SymOp};
