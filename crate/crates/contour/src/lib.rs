//! Weierstrass-Enneper integrals along paths on the three-sheeted surface.
//!
//! The sheet is carried by a root value and continued by nearest-root
//! tracking, so no branch cuts are needed. Each straight segment is covered by
//! 15-point Gauss-Kronrod panels whose nodes double as continuation steps.
//!
//! ```
//! use tpms_contour::{integrate_we, ContourPath};
//! use tpms_weierstrass::{Complex64, FamilyParams};
//!
//! let params = FamilyParams::new(0.2, 0.05, 2.45).unwrap();
//! let path = ContourPath::from_origin(&params, &[Complex64::new(0.5, 0.0)]).unwrap();
//! let out = integrate_we(&params, &path).unwrap();
//! assert!(out.quad_error < 1e-10);
//! ```

mod cuts;
mod error;
mod gk15;
mod path;
mod segment;

pub use cuts::{branch_cut_locus, write_cut_csv, CutFamily, CutPolyline, Rect};
pub use error::ContourError;
pub use path::{continue_root, integrate_we, integrate_with, map_point, ContourPath, WeIntegral};
pub use gk15::nodes as gauss_kronrod_nodes;
pub use segment::{integrate_segment, Chart, QuadOptions, Segment, SegmentIntegral};
