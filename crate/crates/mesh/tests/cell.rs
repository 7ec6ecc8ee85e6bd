mod common;

use std::f64::consts::PI;

use common::{unit_cell, unit_member};
use tpms_geometry::{
    angle_deficit_K, euler_genus, find_flat_points, gauss_bonnet_total, read_obj, write_obj, EdgeMap,
};
use tpms_mesh::{default_weld_tol, group_generators, invariance_gap, Cell, CellOptions, MeshError};
use tpms_weierstrass::branch_points;

fn curvature_rms(cell: &Cell) -> f64 {
    let discrete = angle_deficit_K(&cell.mesh).unwrap();
    let analytic = cell.analytic_curvature();
    let num: f64 = discrete.iter().zip(&analytic).map(|(d, a)| (d - a).powi(2)).sum();
    let den: f64 = analytic.iter().map(|a| a * a).sum();
    (num / den).sqrt()
}

#[test]
fn member_has_unit_pitch() {
    assert!((unit_cell(8).rho() - 1.0).abs() < 0.01);
}

#[test]
fn cell_is_a_closed_genus_four_surface() {
    let cell = unit_cell(8);
    EdgeMap::build(&cell.mesh).check_closed().unwrap();
    let topo = euler_genus(&cell.mesh).unwrap();
    assert_eq!((topo.euler, topo.genus, topo.sheets), (-6, 4, 3));
    let gb = gauss_bonnet_total(&cell.mesh).unwrap();
    assert!((gb / (-12.0 * PI) - 1.0).abs() < 1e-6, "{gb}");
}

#[test]
fn cell_lives_in_the_standard_hexagonal_setting() {
    let cell = unit_cell(8);
    let sol = unit_member();
    assert_eq!((cell.a, cell.c), (sol.a, sol.c));
    let l = cell.mesh.lattice.as_ref().unwrap();
    assert!((l.vectors[0] - nalgebra::Vector3::new(sol.a, 0.0, 0.0)).norm() < 1e-12);
    assert!((cell.alignment.rotation.determinant().abs() - 1.0).abs() < 1e-12);
    assert!(cell.invariance_residual < 1e-6 * cell.a);
}

#[test]
fn triangles_are_not_degenerate() {
    let cell = unit_cell(8);
    let n = cell.mesh.triangle_count();
    let mean = cell.mesh.area() / n as f64;
    assert!((0..n).all(|t| cell.mesh.triangle_area(t) > 1e-12 * mean));
}

#[test]
fn cell_is_invariant_under_the_group() {
    let cell = unit_cell(8);
    let ops = group_generators(cell.c, cell.a);
    let tol = default_weld_tol(cell.a);
    for op in &ops {
        let gap = invariance_gap(&cell.mesh, op, &cell.lattice(), tol).expect("image lands on the cell");
        assert!(gap < tol);
    }
}

#[test]
fn twelve_flat_points_of_winding_two_sit_over_the_branch_points() {
    let cell = unit_cell(16);
    let flats = find_flat_points(&cell.mesh, None).unwrap();
    assert_eq!(flats.len(), 12);
    assert!(flats.iter().all(|f| f.winding == 2));
    let points = branch_points(&unit_member().params).points;
    let mut hit = [false; 12];
    for f in &flats {
        let xi = cell.param_of_normal(&nalgebra::Vector3::from(f.normal));
        let (i, d) = points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, (p - xi).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert!(d < 0.05, "flat point at {xi} is {d} from the nearest branch point");
        assert!(!hit[i]);
        hit[i] = true;
    }
}

#[test]
fn curvature_converges_to_the_analytic_value() {
    let rms: Vec<f64> = [16, 32, 64].iter().map(|&n| curvature_rms(&unit_cell(n))).collect();
    assert!(rms[0] > rms[1] && rms[1] > rms[2], "{rms:?}");
    assert!(rms[2] < 0.10, "{rms:?}");
}

#[test]
fn area_is_stable_under_refinement() {
    let (coarse, fine) = (unit_cell(16).mesh.area(), unit_cell(32).mesh.area());
    assert!(((coarse - fine) / fine).abs() < 0.005);
}

#[test]
fn unsolved_angle_does_not_close() {
    let sol = unit_member();
    let mut params = sol.params;
    params.theta += 0.05;
    let err = Cell::build(params, sol.c, sol.a, &CellOptions { resolution: 4, ..Default::default() }).unwrap_err();
    assert!(matches!(err, MeshError::NotClosed { .. } | MeshError::LatticeNotFound { .. }), "{err}");
}

#[test]
fn obj_export_round_trips() {
    let cell = unit_cell(8);
    let mut buf = Vec::new();
    write_obj(&mut buf, &cell.mesh, &["cell".to_string()]).unwrap();
    let back = read_obj(buf.as_slice()).unwrap();
    assert_eq!(back.vertex_count(), cell.mesh.vertex_count());
    assert_eq!(euler_genus(&back).unwrap().euler, -6);
    assert!((back.area() - cell.mesh.area()).abs() < 1e-6 * cell.mesh.area());
}
