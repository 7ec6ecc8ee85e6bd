use std::f64::consts::PI;

use proptest::prelude::*;
use tpms_contour::*;
use tpms_weierstrass::{Complex64, FamilyParams, Weierstrass};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn generic() -> FamilyParams {
    FamilyParams::new(0.2, 0.05, 2.45).unwrap()
}

/// Roots of `R^3 + p R + q` by Durand-Kerner.
fn dk_roots(p: Complex64, q: Complex64) -> [Complex64; 3] {
    let mut z = [c(0.4, 0.9), c(0.4, 0.9).powu(2), c(0.4, 0.9).powu(3)];
    let scale = p.norm().sqrt().max(q.norm().cbrt()).max(1e-3);
    for r in z.iter_mut() {
        *r *= scale;
    }
    for _ in 0..500 {
        for k in 0..3 {
            let f = z[k] * z[k] * z[k] + p * z[k] + q;
            let mut den = c(1.0, 0.0);
            for j in 0..3 {
                if j != k {
                    den *= z[k] - z[j];
                }
            }
            let step = f / den;
            z[k] -= step;
        }
    }
    z
}

/// Composite Simpson along a polyline, tracking the root that stays nearest
/// to the previous one with a fixed fine step.
fn simpson_oracle(params: &FamilyParams, anchors: &[Complex64], start: Complex64, n: usize) -> ([Complex64; 3], Complex64) {
    let a = params.a();
    let bb = a + a.inv();
    let gi = 2.0 - bb;
    let unit_roots = |z: Complex64| {
        let z6 = z.powu(6);
        let q = gi / (z6 * z6 + bb * z6 + 1.0);
        dk_roots(3.0 * q * z * z, -2.0 * q)
    };
    let mut r = start;
    let mut phi = [c(0.0, 0.0); 3];
    for w in anchors.windows(2) {
        let d = w[1] - w[0];
        let mut vals = Vec::with_capacity(2 * n + 1);
        for k in 0..=2 * n {
            let z = w[0] + d * (k as f64 / (2 * n) as f64);
            let roots = unit_roots(z);
            r = *roots
                .iter()
                .min_by(|x, y| (**x - r).norm().total_cmp(&(**y - r).norm()))
                .unwrap();
            vals.push([(1.0 - z * z) * r, c(0.0, 1.0) * (1.0 + z * z) * r, 2.0 * z * r]);
        }
        let h = d / (2 * n) as f64;
        for k in 0..3 {
            let mut s = vals[0][k] + vals[2 * n][k];
            for (j, v) in vals.iter().enumerate().take(2 * n).skip(1) {
                s += v[k] * if j % 2 == 1 { 4.0 } else { 2.0 };
            }
            phi[k] += s * h / 3.0;
        }
    }
    (phi, r)
}

fn circle(center: Complex64, radius: f64, start_angle: f64, n: usize) -> Vec<Complex64> {
    (0..=n)
        .map(|k| center + radius * Complex64::from_polar(1.0, start_angle + 2.0 * PI * k as f64 / n as f64))
        .collect()
}

fn max_diff(a: &[Complex64; 3], b: &[Complex64; 3]) -> f64 {
    (0..3).map(|k| (a[k] - b[k]).norm()).fold(0.0, f64::max)
}

#[test]
fn matches_fine_step_oracle() {
    let params = generic();
    let anchors = [c(0.0, 0.0), c(0.3, 0.45), c(1.0, 0.0), c(0.5, -0.8)];
    let path = ContourPath::from_origin(&params, &anchors[1..]).unwrap();
    let got = integrate_we(&params, &path).unwrap();
    let (phi, r) = simpson_oracle(&params, &anchors, path.start_root / params.zeta(), 4000);
    assert!(max_diff(&got.phi, &phi) < 1e-9, "{:?} vs {:?}", got.phi, phi);
    assert!((got.end_root / params.zeta() - r).norm() < 1e-9);
}

#[test]
fn scherk_real_segment_has_imaginary_second_form() {
    let params = FamilyParams::scherk(0.0);
    let path = ContourPath::from_origin(&params, &[c(0.5, 0.0)]).unwrap();
    let out = integrate_we(&params, &path).unwrap();
    assert!(out.phi[1].re.abs() < 1e-12);
    assert!((Complex64::from_polar(1.0, PI) * out.phi[1]).re.abs() < 1e-12);
    // The anchor sheet is the doubly periodic Scherk function there.
    let exact = |z: Complex64| 2.0 / (z.powu(4) + z * z + 1.0);
    let (phi, _) = simpson_oracle(&params, &[c(0.0, 0.0), c(0.5, 0.0)], exact(c(0.0, 0.0)), 2000);
    assert!(max_diff(&out.phi, &phi) < 1e-11);
}

#[test]
fn degenerate_path_is_zero() {
    let params = generic();
    let p = c(0.3, 0.2);
    let r = params.zeta() * Weierstrass::new(params).unit_roots(p)[1];
    let path = ContourPath::new(&params, vec![p, p], r).unwrap();
    let out = integrate_we(&params, &path).unwrap();
    assert_eq!(out.phi, [c(0.0, 0.0); 3]);
    assert!((out.end_root - r).norm() < 1e-15);
    assert_eq!(map_point(&params, &path, [1.0, 2.0, 3.0]).unwrap(), [1.0, 2.0, 3.0]);
    assert!((continue_root(&params, &path).unwrap() - r).norm() < 1e-15);
}

#[test]
fn rejects_bad_paths() {
    let params = generic();
    let f = Weierstrass::new(params);
    let b = f.branch_points().points[2];
    assert!(matches!(
        ContourPath::new(&params, vec![c(0.0, 0.0)], c(1.0, 0.0)),
        Err(ContourError::TooFewAnchors(1))
    ));
    let r0 = params.zeta() * f.anchor_unit_root();
    assert!(matches!(
        ContourPath::new(&params, vec![c(0.0, 0.0), b], r0),
        Err(ContourError::AnchorNearBranchPoint { branch: 2, .. })
    ));
    assert!(matches!(
        ContourPath::new(&params, vec![c(0.0, 0.0), c(0.5, 0.0)], r0 * 1.01),
        Err(ContourError::BadStartRoot { .. })
    ));
    let path = ContourPath::new(&params, vec![c(0.0, 0.0), b * 0.5], r0).unwrap();
    assert!((path.min_branch_distance - 0.5 * b.norm()).abs() < 1e-12);
}

#[test]
fn loop_without_branch_point_returns_start() {
    let params = generic();
    let f = Weierstrass::new(params);
    let anchors = circle(c(0.0, 0.0), 0.4, 0.0, 24);
    for r in f.unit_roots(anchors[0]) {
        let path = ContourPath::new(&params, anchors.clone(), params.zeta() * r).unwrap();
        let end = continue_root(&params, &path).unwrap();
        assert!((end - path.start_root).norm() < 1e-9);
    }
}

#[test]
fn loop_around_branch_point_swaps_branched_sheets() {
    let params = generic();
    let f = Weierstrass::new(params);
    for index in [0, 3, 7, 11] {
        let b = f.branch_points().points[index];
        let anchors = circle(b, 0.05, 0.3, 32);
        let finite = f.unit_root_at_branch_point(index).unwrap();
        let mut roots = f.unit_roots(anchors[0]).to_vec();
        roots.sort_by(|x, y| (*x - finite).norm().total_cmp(&(*y - finite).norm()));
        let (unbranched, b1, b2) = (roots[0], roots[1], roots[2]);
        let zeta = params.zeta();
        let swap = |r: Complex64| {
            let path = ContourPath::new(&params, anchors.clone(), zeta * r).unwrap();
            continue_root(&params, &path).unwrap() / zeta
        };
        assert!((swap(unbranched) - unbranched).norm() < 1e-9);
        assert!((swap(b1) - b2).norm() < 1e-9, "branch point {index}");
        assert!((swap(b2) - b1).norm() < 1e-9);
    }
}

#[test]
fn loop_at_coincident_roots_is_trivial() {
    let params = generic();
    let f = Weierstrass::new(params);
    let p = Complex64::from_polar(1.0, PI / 6.0);
    let anchors = circle(p, 0.05, 0.1, 32);
    for r in f.unit_roots(anchors[0]) {
        let path = ContourPath::new(&params, anchors.clone(), params.zeta() * r).unwrap();
        assert!(path.min_branch_distance > 0.1);
        let end = continue_root(&params, &path).unwrap();
        assert!((end - path.start_root).norm() < 1e-9);
    }
}

#[test]
fn reversal_negates() {
    let params = generic();
    let path = ContourPath::from_origin(&params, &[c(0.4, 0.3), c(0.9, -0.2)]).unwrap();
    let fwd = integrate_we(&params, &path).unwrap();
    let back = integrate_we(&params, &path.reversed(fwd.end_root)).unwrap();
    for k in 0..3 {
        assert!((fwd.phi[k] + back.phi[k]).norm() < 2e-10);
    }
    assert!((back.end_root - path.start_root).norm() < 1e-10);
}

#[test]
fn additive_over_concatenation() {
    let params = generic();
    let whole = ContourPath::from_origin(&params, &[c(0.4, 0.3), c(0.9, -0.2)]).unwrap();
    let first = ContourPath::from_origin(&params, &[c(0.4, 0.3)]).unwrap();
    let a = integrate_we(&params, &first).unwrap();
    let second = ContourPath::new(&params, vec![c(0.4, 0.3), c(0.9, -0.2)], a.end_root).unwrap();
    let b = integrate_we(&params, &second).unwrap();
    let w = integrate_we(&params, &whole).unwrap();
    for k in 0..3 {
        assert!((a.phi[k] + b.phi[k] - w.phi[k]).norm() < 2e-10);
    }
}

#[test]
fn path_independent_without_enclosed_branch_point() {
    let params = generic();
    let end = c(0.6, 0.35);
    let one = ContourPath::from_origin(&params, &[end]).unwrap();
    let two = ContourPath::from_origin(&params, &[c(0.5, -0.1), c(0.7, 0.1), end]).unwrap();
    let p1 = map_point(&params, &one, [0.0; 3]).unwrap();
    let p2 = map_point(&params, &two, [0.0; 3]).unwrap();
    for k in 0..3 {
        assert!((p1[k] - p2[k]).abs() < 2e-10);
    }
}

#[test]
fn sheet_sum_vanishes() {
    let params = generic();
    let f = Weierstrass::new(params);
    let anchors = vec![c(0.1, 0.1), c(0.7, 0.2), c(0.3, 0.9)];
    let mut total = [c(0.0, 0.0); 3];
    for r in f.unit_roots(anchors[0]) {
        let path = ContourPath::new(&params, anchors.clone(), params.zeta() * r).unwrap();
        let out = integrate_we(&params, &path).unwrap();
        for k in 0..3 {
            total[k] += out.phi[k];
        }
    }
    for t in total {
        assert!(t.norm() < 3e-10);
    }
}

#[test]
fn tolerance_halving_within_estimates() {
    let params = generic();
    let f = Weierstrass::new(params);
    let path = ContourPath::from_origin(&params, &[c(0.7, 0.3), c(1.2, -0.4)]).unwrap();
    let loose = QuadOptions {
        abs_tol: 1e-6,
        ..QuadOptions::default()
    };
    let tight = QuadOptions {
        abs_tol: 5e-7,
        ..QuadOptions::default()
    };
    let a = integrate_with(&f, &path, &loose).unwrap();
    let b = integrate_with(&f, &path, &tight).unwrap();
    assert!(a.quad_error < 1e-6 && b.quad_error < 5e-7);
    assert!(max_diff(&a.phi, &b.phi) <= a.quad_error + b.quad_error);
}

#[test]
fn step_refinement_does_not_move_the_root() {
    let params = generic();
    let f = Weierstrass::new(params);
    let anchors = circle(c(0.0, 0.0), 0.95, 0.2, 12);
    let path = ContourPath::new(&params, anchors.clone(), params.zeta() * f.unit_roots(anchors[0])[2]).unwrap();
    let coarse = integrate_with(&f, &path, &QuadOptions::default()).unwrap();
    let fine = integrate_with(
        &f,
        &path,
        &QuadOptions {
            initial_step: 0.01,
            separation_ratio: 0.05,
            ..QuadOptions::default()
        },
    )
    .unwrap();
    assert!((coarse.end_root - fine.end_root).norm() < 1e-9);
}

#[test]
fn inverted_chart_agrees_along_a_ray() {
    let params = generic();
    let f = Weierstrass::new(params);
    let dir = Complex64::from_polar(1.0, 0.4);
    let (a, b) = (2.0 * dir, 3.5 * dir);
    for r in f.unit_roots(a) {
        let plane = integrate_segment(&f, &Segment::new(Chart::Plane, a, b), r, &QuadOptions::default()).unwrap();
        let inv = Chart::Inverted;
        let other = integrate_segment(
            &f,
            &Segment::new(inv, inv.coordinate(a), inv.coordinate(b)),
            inv.root(a, r),
            &QuadOptions::default(),
        )
        .unwrap();
        assert!(max_diff(&plane.phi, &other.phi) < 1e-9);
        assert!((inv.root(b, plane.end_root.unwrap()) - other.end_root.unwrap()).norm() < 1e-9);
    }
}

#[test]
fn segment_into_branch_point() {
    let params = generic();
    let f = Weierstrass::new(params);
    let index = 1;
    let b = f.branch_points().points[index];
    let a = c(0.0, 0.0);
    let seg = Segment::to_branch_point(Chart::Plane, a, &f, index);
    let finite = f.unit_root_at_branch_point(index).unwrap();
    let mut hits = 0;
    for r in f.unit_roots(a) {
        let out = integrate_segment(&f, &seg, r, &QuadOptions::default()).unwrap();
        // Plain segments stopping short, extrapolated in the square root of
        // the gap, approach the same value.
        let stop = |eps: f64| {
            let end = b + (a - b) * eps;
            // Direct evaluation of g loses digits this close to the branch
            // point, so the oracle runs looser.
            let opts = QuadOptions { abs_tol: 1e-6, ..QuadOptions::default() };
            integrate_segment(&f, &Segment::new(Chart::Plane, a, end), r, &opts).unwrap()
        };
        let (near, far) = (stop(1e-6), stop(4e-6));
        for k in 0..3 {
            let extrapolated = 2.0 * near.phi[k] - far.phi[k];
            assert!((extrapolated - out.phi[k]).norm() < 1e-5, "{k}: {extrapolated} {}", out.phi[k]);
        }
        if let Some(end) = out.end_root {
            assert!((end - finite).norm() < 1e-14);
            assert!((near.end_root.unwrap() - finite).norm() < 1e-4);
            hits += 1;
        } else {
            assert!(near.end_root.unwrap().norm() > 10.0);
        }
    }
    assert_eq!(hits, 1);
}

#[test]
fn passing_through_branch_point_is_reported() {
    let params = generic();
    let f = Weierstrass::new(params);
    let b = f.branch_points().points[0];
    let path = ContourPath::from_origin(&params, &[2.0 * b]).unwrap();
    assert!(path.min_branch_distance < 1e-12);
    let err = integrate_we(&params, &path);
    assert!(
        matches!(err, Err(ContourError::RootCollision { .. } | ContourError::ToleranceNotMet { .. })),
        "{err:?}"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reversal_property(x0 in -0.6f64..0.6, y0 in -0.6f64..0.6, x1 in -0.6f64..0.6, y1 in -0.6f64..0.6, sheet in 0usize..3) {
        let params = generic();
        let f = Weierstrass::new(params);
        let a = c(x0, y0);
        let r = params.zeta() * f.unit_roots(a)[sheet];
        let path = ContourPath::new(&params, vec![a, c(x1, y1)], r).unwrap();
        let fwd = integrate_we(&params, &path).unwrap();
        let back = integrate_we(&params, &path.reversed(fwd.end_root)).unwrap();
        for k in 0..3 {
            prop_assert!((fwd.phi[k] + back.phi[k]).norm() < 2e-10);
        }
    }

    #[test]
    fn end_root_solves_cubic(x in -1.5f64..1.5, y in -1.5f64..1.5) {
        let params = generic();
        let f = Weierstrass::new(params);
        prop_assume!(f.branch_points().nearest(c(x, y)).1 > 1e-3);
        let path = ContourPath::from_origin(&params, &[c(x, y)]);
        prop_assume!(path.as_ref().map(|p| p.min_branch_distance > 1e-3).unwrap_or(false));
        let out = integrate_we(&params, &path.unwrap()).unwrap();
        prop_assert!(f.unit_residual(c(x, y), out.end_root / params.zeta()) < 1e-10);
    }
}
