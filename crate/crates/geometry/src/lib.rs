//! Triangle meshes on a 3-torus and the discrete checks run on them:
//! angle-deficit curvature, Gauss–Bonnet, Euler characteristic and genus,
//! Gauss-map winding numbers and flat-point detection.
//!
//! ```
//! use tpms_geometry::{euler_genus, gauss_bonnet_total, shapes};
//!
//! let torus = shapes::flat_torus(4, 4);
//! let topo = euler_genus(&torus).unwrap();
//! assert_eq!((topo.euler, topo.genus), (0, 1));
//! assert!(gauss_bonnet_total(&torus).unwrap().abs() < 1e-12);
//! ```

pub mod curvature;
mod error;
pub mod gauss_map;
pub mod io;
mod mesh;
pub mod shapes;
pub mod topology;
pub mod weld;

pub use curvature::{
    angle_deficit_K, angle_deficits, gauss_bonnet_total, mean_curvature, mean_curvature_normal, mean_edge_length,
    vertex_areas, vertex_normals,
};
pub use error::GeometryError;
pub use gauss_map::{
    default_flat_eps, find_flat_points, stereographic, winding_number, write_flat_points_json, FlatPoint, GaussMap,
    Winding,
};
pub use io::{read_obj, write_obj, write_ply};
pub use mesh::{BoundaryTag, Identification, Lattice, PeriodicMesh, TriMesh, Vec3};
pub use topology::{euler_genus, ring_distances, vertex_neighbours, vertex_triangles, EdgeMap, Topology};
pub use weld::{unwrap, weld_periodic, Welded};
