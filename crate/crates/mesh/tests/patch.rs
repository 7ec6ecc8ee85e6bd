mod common;

use std::f64::consts::PI;

use common::unit_cell;
use proptest::prelude::*;
use tpms_geometry::{euler_genus, BoundaryTag};
use tpms_mesh::{default_weld_tol, group_generators, replicate_and_weld, sample_semicircle, Patch};

#[test]
fn semicircle_counts() {
    let d = sample_semicircle(2, 3, &[]);
    assert_eq!((d.points.len(), d.triangles.len()), (7, 6));
}

#[test]
fn semicircle_area_approaches_half_disc() {
    let d = sample_semicircle(64, 64, &[]);
    assert!((d.area() / (PI / 2.0) - 1.0).abs() < 0.01);
}

#[test]
fn refinement_points_outside_are_ignored() {
    let plain = sample_semicircle(4, 5, &[]);
    let outside = sample_semicircle(4, 5, &[num_complex::Complex64::new(0.3, -0.2), num_complex::Complex64::new(2.0, 0.5)]);
    assert_eq!(plain.points, outside.points);
    let inside = sample_semicircle(4, 5, &[num_complex::Complex64::new(0.3, 0.2)]);
    assert!(inside.points.iter().any(|p| (p - num_complex::Complex64::new(0.3, 0.2)).norm() < 1e-12));
}

proptest! {
    #[test]
    fn semicircle_counts_follow_the_grid(nr in 1usize..20, na in 2usize..20) {
        let d = sample_semicircle(nr, na, &[]);
        prop_assert_eq!(d.points.len(), 1 + nr * na);
        prop_assert_eq!(d.triangles.len(), (na - 1) * (2 * nr - 1));
        let oriented = d.triangles.iter().all(|t| {
            let (a, b, c) = (d.points[t[0]], d.points[t[1]], d.points[t[2]]);
            ((b - a).conj() * (c - a)).im > 0.0
        });
        prop_assert!(oriented);
    }
}

#[test]
fn patch_is_one_twelfth_of_the_cell() {
    let cell = unit_cell(64);
    let patch = Patch::from_cell(&cell).unwrap();
    assert!((12.0 * patch.mesh.area() / cell.mesh.area() - 1.0).abs() < 0.01);
    assert!((patch.spherical_area() / PI - 1.0).abs() < 0.02);
    assert_eq!(patch.flat_points().len(), 1);
}

#[test]
fn patch_boundary_is_tagged() {
    let patch = Patch::from_cell(&unit_cell(8)).unwrap();
    let tags = &patch.mesh.boundary_tags;
    assert!(tags.contains(&BoundaryTag::Arc));
    assert!(tags.contains(&BoundaryTag::Diameter));
    assert!(tags.contains(&BoundaryTag::Interior));
}

#[test]
fn patch_positions_do_not_depend_on_the_tree_root() {
    let cell = unit_cell(8);
    let a = Patch::from_cell(&cell).unwrap();
    let b = Patch::build(&cell, cell.theta, Some(a.mesh.vertices.len() / 2)).unwrap();
    let shift = a.mesh.vertices[a.root] - b.mesh.vertices[a.root];
    let worst = a
        .mesh
        .vertices
        .iter()
        .zip(&b.mesh.vertices)
        .map(|(p, q)| (p - q - shift).norm())
        .fold(0.0, f64::max);
    assert!(worst < 5e-10, "{worst:e}");
}

#[test]
fn replicated_patch_welds_into_the_cell() {
    let cell = unit_cell(8);
    let patch = Patch::from_cell(&cell).unwrap();
    let ops = group_generators(cell.c, cell.a);
    assert_eq!(ops.len(), 12);
    let (pm, report) = replicate_and_weld(&patch.mesh, &ops, &cell.lattice(), default_weld_tol(cell.a));
    assert!(report.is_closed(), "{} unmatched", report.unmatched_edges);
    assert_eq!(report.vertices_before, 12 * patch.mesh.vertices.len());
    assert_eq!(pm.vertex_count(), cell.mesh.vertex_count());
    assert_eq!(pm.triangle_count(), cell.mesh.triangle_count());
    assert_eq!(euler_genus(&pm).unwrap().euler, -6);
    let json = serde_json::to_value(&report).unwrap();
    assert_eq!(json["unmatched_edges"], 0);
}

#[test]
fn unsolved_patch_leaves_open_seams() {
    let cell = unit_cell(8);
    let patch = Patch::build(&cell, cell.theta + 0.05, None).unwrap();
    let ops = group_generators(cell.c, cell.a);
    let (_, report) = replicate_and_weld(&patch.mesh, &ops, &cell.lattice(), default_weld_tol(cell.a));
    assert!(report.unmatched_edges > 0);
    assert_eq!(report.unmatched_midpoints.len(), report.unmatched_edges);
}
