use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;
use tpms_geometry::*;

/// Hexagonal graph torus `z = eps * sum sin(k_i . r)` over the reciprocal
/// vectors at 120 degrees; its only flat point per cell is the origin, a
/// monkey saddle.
fn monkey_torus(n: usize, eps: f64) -> PeriodicMesh {
    let a1 = Vec3::new(1.0, 0.0, 0.0);
    let a2 = Vec3::new(0.5, 3f64.sqrt() / 2.0, 0.0);
    let f = |s: f64, t: f64| {
        let (p, q) = (2.0 * PI * s, 2.0 * PI * t);
        p.sin() + q.sin() - (p + q).sin()
    };
    let mut v = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let (s, t) = (i as f64 / n as f64, j as f64 / n as f64);
            v.push(a1 * s + a2 * t + Vec3::z() * eps * f(s, t));
        }
    }
    let mut tris = Vec::new();
    let mut offs = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let c = |di: usize, dj: usize| {
                let (ii, jj) = (i + di, j + dj);
                ((jj % n) * n + ii % n, [(ii / n) as i32, (jj / n) as i32, 0])
            };
            let (a, b, cc, d) = (c(0, 0), c(1, 0), c(1, 1), c(0, 1));
            tris.push([a.0, b.0, cc.0]);
            offs.push([a.1, b.1, cc.1]);
            tris.push([a.0, cc.0, d.0]);
            offs.push([a.1, cc.1, d.1]);
        }
    }
    let lattice = Lattice::new([a1, a2, Vec3::z() * 10.0]).unwrap();
    PeriodicMesh::periodic(TriMesh::new(v, tris), lattice, offs)
}

/// Open graph patch over a square grid centred on the origin.
fn graph_patch(n: usize, f: impl Fn(f64, f64) -> f64) -> (PeriodicMesh, usize) {
    let mut v = Vec::new();
    for j in 0..=2 * n {
        for i in 0..=2 * n {
            let (x, y) = ((i as f64 - n as f64) / n as f64, (j as f64 - n as f64) / n as f64);
            v.push(Vec3::new(x, y, f(x, y)));
        }
    }
    let w = 2 * n + 1;
    let mut tris = Vec::new();
    for j in 0..2 * n {
        for i in 0..2 * n {
            let (a, b, c, d) = (j * w + i, j * w + i + 1, (j + 1) * w + i + 1, (j + 1) * w + i);
            tris.push([a, b, c]);
            tris.push([a, c, d]);
        }
    }
    (PeriodicMesh::closed(TriMesh::new(v, tris)), n * w + n)
}

#[test]
fn icosahedron_vertices_have_deficit_pi_over_three() {
    let ico = shapes::icosahedron();
    let def = angle_deficits(&ico).unwrap();
    // Five equilateral corners of pi/3 each.
    for d in &def {
        assert_relative_eq!(*d, PI / 3.0, epsilon = 1e-12);
    }
    let edge = (ico.mesh.vertices[ico.mesh.triangles[0][0]] - ico.mesh.vertices[ico.mesh.triangles[0][1]]).norm();
    let bary = 5.0 * (3f64.sqrt() / 4.0 * edge * edge) / 3.0;
    for k in angle_deficit_K(&ico).unwrap() {
        assert_relative_eq!(k, PI / 3.0 / bary, epsilon = 1e-12);
    }
    assert_relative_eq!(gauss_bonnet_total(&ico).unwrap(), 4.0 * PI, epsilon = 1e-12);
    let t = euler_genus(&ico).unwrap();
    assert_eq!((t.vertices, t.edges, t.faces, t.euler, t.genus), (12, 30, 20, 2, 0));
}

#[test]
fn flat_torus_is_flat_with_no_flat_points() {
    let torus = shapes::flat_torus(6, 5);
    for k in angle_deficit_K(&torus).unwrap() {
        assert!(k.abs() < 1e-12);
    }
    assert!(gauss_bonnet_total(&torus).unwrap().abs() < 1e-12);
    let t = euler_genus(&torus).unwrap();
    assert_eq!((t.euler, t.genus, t.sheets), (0, 1, 0));
    assert_relative_eq!(torus.area(), 1.0, epsilon = 1e-12);
    let w = winding_number(&torus, 7, 1).unwrap();
    assert!(w.degenerate);
    assert!(find_flat_points(&torus, None).unwrap().is_empty());
}

#[test]
fn open_and_misoriented_meshes_are_rejected() {
    let mut ico = shapes::icosahedron();
    ico.mesh.triangles.pop();
    assert!(matches!(euler_genus(&ico), Err(GeometryError::Open { open: 3, .. })));
    assert!(angle_deficit_K(&ico).is_err());
    let mut ico = shapes::icosahedron();
    let t = ico.mesh.triangles[4];
    ico.mesh.triangles[4] = [t[0], t[2], t[1]];
    assert!(matches!(euler_genus(&ico), Err(GeometryError::Orientation(..))));
}

#[test]
fn sphere_curvatures_converge() {
    let s = shapes::icosphere(4);
    let k = angle_deficit_K(&s).unwrap();
    let mean_k = k.iter().sum::<f64>() / k.len() as f64;
    assert!((mean_k - 1.0).abs() < 0.02, "{mean_k}");
    let h = mean_curvature(&s);
    let mean_h = h.iter().sum::<f64>() / h.len() as f64;
    assert!((mean_h - 1.0).abs() < 0.02, "{mean_h}");
    let n = vertex_normals(&s);
    for (p, n) in s.mesh.vertices.iter().zip(&n) {
        assert!((p - n).norm() < 0.02);
    }
}

#[test]
fn sphere_gauss_map_winds_once() {
    let s = shapes::icosphere(3);
    for v in [0, 50, 400] {
        let w = winding_number(&s, v, 2).unwrap();
        assert_eq!(w.winding, 1);
        assert!(w.turns > 0.0);
        assert!(w.residual < 1e-6);
    }
}

#[test]
fn saddles_wind_once_and_monkey_saddles_twice() {
    let (saddle, c) = graph_patch(8, |x, y| 0.3 * (x * x - y * y));
    let w = winding_number(&saddle, c, 2).unwrap();
    assert_eq!(w.winding, 1);
    assert!(w.turns < 0.0, "Gauss map reverses orientation at a saddle");
    let (monkey, c) = graph_patch(8, |x, y| 0.3 * (x * x * x - 3.0 * x * y * y));
    for r in 1..=3 {
        let w = winding_number(&monkey, c, r).unwrap();
        assert_eq!(w.winding, 2, "ring {r}: {w:?}");
    }
}

#[test]
fn ring_loops_are_closed_and_ordered() {
    let (patch, c) = graph_patch(6, |_, _| 0.0);
    let g = GaussMap::new(&patch);
    let r1 = g.ring_loop(c, 1).unwrap();
    assert_eq!(r1.len(), 6);
    let r2 = g.ring_loop(c, 2).unwrap();
    assert_eq!(r2.len(), 12);
    // Consecutive ring vertices are mesh neighbours.
    for k in 0..r2.len() {
        assert!(g.neighbours()[r2[k]].contains(&r2[(k + 1) % r2.len()]));
    }
}

#[test]
fn periodic_monkey_saddle_is_the_only_flat_point() {
    let torus = monkey_torus(48, 0.04);
    let t = euler_genus(&torus).unwrap();
    assert_eq!(t.genus, 1);
    assert!(gauss_bonnet_total(&torus).unwrap().abs() < 1e-9);
    let flats = find_flat_points(&torus, None).unwrap();
    assert_eq!(flats.len(), 1, "{flats:?}");
    assert_eq!(flats[0].vertex, 0);
    assert_eq!(flats[0].winding, 2);
    // Normal is vertical there, so the stereographic coordinate is infinite
    // or zero depending on the side; the graph normal points up.
    assert!(flats[0].normal[2] > 0.999);
    let mut json = Vec::new();
    write_flat_points_json(&mut json, &flats).unwrap();
    let back: serde_json::Value = serde_json::from_slice(&json).unwrap();
    for key in ["vertex", "position", "normal", "xi", "winding", "ring_radius"] {
        assert!(back[0].get(key).is_some(), "{key}");
    }
}

#[test]
fn stereographic_inverts_the_gauss_normal() {
    for xi in [num_complex::Complex64::new(0.3, -0.7), num_complex::Complex64::new(-2.0, 1.5)] {
        let d = 1.0 + xi.norm_sqr();
        let n = Vec3::new(2.0 * xi.re / d, 2.0 * xi.im / d, (xi.norm_sqr() - 1.0) / d);
        assert!((stereographic(&n) - xi).norm() < 1e-12);
    }
}

#[test]
fn obj_round_trip_rewelds_the_torus() {
    let torus = monkey_torus(12, 0.04);
    let mut buf = Vec::new();
    write_obj(&mut buf, &torus, &["test mesh".to_string()]).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("# test mesh\n# lattice "));
    assert!(text.lines().any(|l| l.starts_with("v ")));
    assert!(text.lines().filter(|l| l.starts_with("f ")).all(|l| l.split_whitespace().count() == 4));
    let back = read_obj(buf.as_slice()).unwrap();
    assert_eq!(back.vertex_count(), torus.vertex_count());
    assert_eq!(euler_genus(&back).unwrap(), euler_genus(&torus).unwrap());
    assert_relative_eq!(back.area(), torus.area(), max_relative = 1e-12);
}

#[test]
fn corrupted_obj_is_an_error() {
    assert!(read_obj("v 0 0 0\nv 1 0 0\nf 1 2 7\n".as_bytes()).is_err());
    assert!(read_obj("v 0 0 zero\n".as_bytes()).is_err());
    assert!(read_obj("# nothing\n".as_bytes()).is_err());
}

#[test]
fn ply_has_quality_property() {
    let ico = shapes::icosahedron();
    let k = angle_deficit_K(&ico).unwrap();
    let mut buf = Vec::new();
    write_ply(&mut buf, &ico, &k, "curvature").unwrap();
    let header_end = buf.windows(11).position(|w| w == b"end_header\n").unwrap() + 11;
    let header = std::str::from_utf8(&buf[..header_end]).unwrap();
    assert!(header.contains("format binary_little_endian 1.0"));
    assert!(header.contains("property float quality"));
    assert!(header.contains("element vertex 12"));
    assert_eq!(buf.len() - header_end, 12 * 16 + 20 * 13);
    let q = f32::from_le_bytes(buf[header_end + 12..header_end + 16].try_into().unwrap());
    assert_relative_eq!(q as f64, k[0], max_relative = 1e-6);
}

#[test]
fn unwrap_then_weld_is_identity_on_topology() {
    let torus = shapes::flat_torus(5, 7);
    let (flat, _) = unwrap(&torus);
    assert!(flat.vertices.len() > torus.vertex_count());
    let welded = weld_periodic(&flat, torus.lattice.as_ref().unwrap(), 1e-9);
    assert_eq!(welded.mesh.vertex_count(), torus.vertex_count());
    assert_eq!(euler_genus(&welded.mesh).unwrap().euler, 0);
    assert!(welded.max_gap < 1e-12);
}

fn jittered_sphere(seed: &[f64]) -> PeriodicMesh {
    let mut s = shapes::icosphere(2);
    for (i, p) in s.mesh.vertices.iter_mut().enumerate() {
        let j = seed[i % seed.len()];
        *p *= 1.0 + 0.2 * j;
    }
    s
}

proptest! {
    #[test]
    fn gauss_bonnet_holds_under_jitter(seed in prop::collection::vec(-1.0f64..1.0, 7..20)) {
        let s = jittered_sphere(&seed);
        prop_assert!((gauss_bonnet_total(&s).unwrap() - 4.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn curvature_scales_inverse_square(scale in 0.1f64..10.0) {
        let mut torus = monkey_torus(10, 0.05);
        let k0 = angle_deficit_K(&torus).unwrap();
        torus.scale(scale);
        let k1 = angle_deficit_K(&torus).unwrap();
        for (a, b) in k0.iter().zip(&k1) {
            prop_assert!((a / (scale * scale) - b).abs() <= 1e-9 * a.abs().max(1e-6));
        }
    }
}
