use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tpms_weierstrass::*;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Coefficients (ascending) of prod (x - r).
fn expand(roots: &[C]) -> Vec<C> {
    let mut coef = vec![c(1.0, 0.0)];
    for r in roots {
        let mut next = vec![c(0.0, 0.0); coef.len() + 1];
        for (k, a) in coef.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * r;
        }
        coef = next;
    }
    coef
}

fn horner(coef: &[C], x: C) -> C {
    coef.iter().rev().fold(c(0.0, 0.0), |acc, a| acc * x + a)
}

/// Durand-Kerner on a monic polynomial, independent of the Cardano path.
fn durand_kerner(coef: &[C]) -> Vec<C> {
    let n = coef.len() - 1;
    let seed = c(0.4, 0.9);
    let scale = coef.iter().map(|a| a.norm()).fold(1.0, f64::max);
    let mut z: Vec<C> = (0..n).map(|k| seed.powu(k as u32) * scale.powf(1.0 / n as f64)).collect();
    for _ in 0..500 {
        let prev = z.clone();
        for i in 0..n {
            let mut den = c(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = horner(coef, z[i]) / den;
            z[i] -= step;
        }
        let moved: f64 = z.iter().zip(&prev).map(|(a, b)| (a - b).norm()).sum();
        if moved < 1e-15 * scale {
            break;
        }
    }
    z
}

fn multiset_distance(a: &[C], b: &[C]) -> f64 {
    // brute force over the 6 permutations of three
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    perms
        .iter()
        .map(|p| (0..3).map(|k| (a[k] - b[p[k]]).norm()).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

fn sample(rng: &mut ChaCha8Rng) -> (FamilyParams, C) {
    let delta = rng.gen_range(0.01..0.95);
    let eta = rng.gen_range(-0.52..0.52);
    let theta = rng.gen_range(0.0..2.0 * PI);
    let xi = C::from_polar(rng.gen_range(0.0..3.0), rng.gen_range(0.0..2.0 * PI));
    (FamilyParams::new(delta, eta, theta).unwrap(), xi)
}

#[test]
fn branch_points_at_scherk_limit_are_doubled_sixth_roots() {
    let p = FamilyParams::scherk(0.0);
    let bp = branch_points(&p);
    for m in 0..6 {
        let target = C::from_polar(1.0, (m + 1) as f64 * PI / 3.0);
        let hits = bp.iter().filter(|z| (**z - target).norm() < 1e-14).count();
        assert_eq!(hits, 2, "sixth root {m}");
    }
}

#[test]
fn branch_points_at_half_delta() {
    let bp = branch_points(&FamilyParams::new(0.5, 0.0, 0.0).unwrap());
    for m in 0..6 {
        let angle = (2 * m + 1) as f64 * PI / 6.0;
        assert!((bp.points[m] - C::from_polar(0.5, angle)).norm() < 1e-15);
        assert!((bp.points[m + 6] - C::from_polar(2.0, angle)).norm() < 1e-14);
    }
}

#[test]
fn compact_g_matches_monomial_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let (p, xi) = sample(&mut rng);
        let coef = expand(&branch_points(&p).points);
        let direct = horner(&coef, xi);
        let compact = poly_g(&p, xi);
        let scale = 1.0 + xi.norm().powi(12) + direct.norm();
        assert!((direct - compact).norm() / scale < 1e-12);
    }
}

#[test]
fn scherk_g_is_square_of_sixth_power_minus_one() {
    let p = FamilyParams::scherk(0.0);
    let coef = expand(&branch_points(&p).points);
    // oracle: (x^6 - 1)^2 = x^12 - 2 x^6 + 1
    let mut want = vec![c(0.0, 0.0); 13];
    want[0] = c(1.0, 0.0);
    want[6] = c(-2.0, 0.0);
    want[12] = c(1.0, 0.0);
    for (a, b) in coef.iter().zip(&want) {
        assert!((a - b).norm() < 1e-12, "{a} vs {b}");
    }
    for xi in [c(0.3, 0.1), c(-1.2, 0.7), c(2.0, -2.0)] {
        let x6 = xi.powu(6);
        let want = (x6 - 1.0) * (x6 - 1.0);
        assert!((poly_g(&p, xi) - want).norm() < 1e-12 * (1.0 + want.norm()));
        let q = poly_q(&p, xi).unwrap();
        assert!((q - 4.0 / want).norm() < 1e-12 * q.norm());
    }
}

#[test]
fn g_one_plus_g_i_is_four_on_grid() {
    for i in 0..20 {
        for j in 0..20 {
            let delta = 0.01 + 0.98 * i as f64 / 19.0;
            let eta = -0.52 + 1.04 * j as f64 / 19.0;
            let p = FamilyParams::new(delta, eta, 0.0).unwrap();
            let s = poly_g(&p, c(1.0, 0.0)) + poly_g(&p, c(0.0, 1.0));
            assert!((s - 4.0).norm() < 1e-12, "delta {delta} eta {eta}: {s}");
        }
    }
}

#[test]
fn q_examples() {
    let p = FamilyParams::new(0.3, 0.1, 1.0).unwrap();
    assert!((poly_q(&p, c(0.0, 1.0)).unwrap() - 1.0).norm() < 1e-14);
    let xi = c(3e2, 1e2);
    let gi = poly_g(&p, c(0.0, 1.0));
    let far = poly_q(&p, xi).unwrap() * xi.powu(12);
    assert!((far - gi).norm() < 1e-10 * gi.norm());
    let bp = branch_points(&p).points[4];
    match poly_q(&p, bp + 1e-11) {
        Err(WeierstrassError::NearBranchPoint { index, .. }) => assert_eq!(index, 4),
        other => panic!("expected guard, got {other:?}"),
    }
}

#[test]
fn closed_form_roots_satisfy_cubic_and_vieta() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let (p, xi) = sample(&mut rng);
        let Ok(roots) = solve_r(&p, xi) else { continue };
        let (pc, qc) = Weierstrass::new(p).coefficients(xi).unwrap();
        let r = roots.to_array();
        for v in r {
            let terms = [v * v * v, pc * v, qc];
            let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
            let res = (terms[0] + terms[1] + terms[2]).norm() / scale;
            assert!(res < 1e-10, "residual {res} at {xi}");
        }
        let scale = r.iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!((r[0] + r[1] + r[2]).norm() < 1e-10 * scale);
        let prod = r[0] * r[1] * r[2];
        let want = 2.0 * p.zeta().powu(3) * poly_q(&p, xi).unwrap();
        assert!((prod - want).norm() < 1e-10 * want.norm());
    }
}

#[test]
fn closed_form_matches_generic_solver() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..300 {
        let (p, xi) = sample(&mut rng);
        let Ok(roots) = solve_r(&p, xi) else { continue };
        let (pc, qc) = Weierstrass::new(p).coefficients(xi).unwrap();
        let generic = durand_kerner(&[qc, pc, c(0.0, 0.0), c(1.0, 0.0)]);
        let scale = generic.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let d = multiset_distance(&roots.to_array(), &generic);
        assert!(d < 1e-9 * scale.max(1.0), "distance {d} at {xi}");
    }
}

#[test]
fn scherk_anchor_value_is_two() {
    let roots = solve_r(&FamilyParams::scherk(0.0), c(0.0, 0.0)).unwrap();
    assert!((roots.unbranched - 2.0).norm() < 1e-14);
}

#[test]
fn finite_root_is_limit_of_unbranched_sheet() {
    let p = FamilyParams::new(0.2, 0.13, 0.7).unwrap();
    let w = Weierstrass::new(p);
    for (index, b) in branch_points(&p).iter().enumerate() {
        let target = r_at_branch_point(&p, index).unwrap();
        assert!((target.norm() - 2.0 / (3.0 * b.norm_sqr())).abs() < 1e-14);
        let dir = C::from_polar(1.0, b.arg());
        let mut values = Vec::new();
        let mut residuals = Vec::new();
        for dist in [1e-3, 1e-4, 1e-5] {
            let xi = b + dir * dist;
            let r = w.solve(xi).unwrap().to_array();
            let near = *r
                .iter()
                .min_by(|a, b| (**a - target).norm().total_cmp(&(**b - target).norm()))
                .unwrap();
            values.push(near);
            // residual of the limit value itself, scaled by Q
            let (pc, qc) = w.coefficients(xi).unwrap();
            residuals.push((target.powu(3) + pc * target + qc).norm() / qc.norm());
        }
        // linear Richardson on the 1e-4, 1e-5 pair
        let extrap = (10.0 * values[2] - values[1]) / 9.0;
        assert!((extrap - target).norm() < 1e-6, "index {index}");
        assert!(residuals[0] > residuals[1] && residuals[1] > residuals[2]);
    }
}

#[test]
fn curvature_examples() {
    assert!((gaussian_curvature(c(0.0, 0.0), c(2.0, 0.0)).unwrap() + 1.0).abs() < 1e-15);
    assert_eq!(gaussian_curvature(c(0.1, 0.0), c(0.0, 0.0)), Err(WeierstrassError::ZeroValue));
    let huge = gaussian_curvature(c(0.5, 0.5), c(1e12, 0.0)).unwrap();
    assert!(huge <= 0.0 && huge > -1e-20);
}

#[test]
fn discriminant_zero_points() {
    let p = FamilyParams::new(0.2, 0.05, 2.45).unwrap();
    let w = Weierstrass::new(p);
    for m in 0..6 {
        let xi = C::from_polar(1.0, (2 * m + 1) as f64 * PI / 6.0);
        let (pc, qc) = w.coefficients(xi).unwrap();
        let scale = 4.0 * pc.norm().powi(3) + 27.0 * qc.norm_sqr();
        assert!(discriminant(&p, xi).unwrap().norm() < 1e-10 * scale);
        let xi = C::from_polar(1.0, m as f64 * PI / 3.0);
        let (pc, qc) = w.coefficients(xi).unwrap();
        let scale = 4.0 * pc.norm().powi(3) + 27.0 * qc.norm_sqr();
        assert!(discriminant(&p, xi).unwrap().norm() > 1e-3 * scale);
    }
    for b in branch_points(&p).iter() {
        let far = discriminant_cleared(&p, b * 1.1).norm();
        assert!(discriminant_cleared(&p, *b).norm() < 1e-10 * far);
    }
}

#[test]
fn discriminant_at_origin() {
    let p = FamilyParams::new(0.35, -0.2, 1.3).unwrap();
    let q0 = poly_q(&p, c(0.0, 0.0)).unwrap();
    let want = -108.0 * p.zeta().powu(6) * q0 * q0;
    assert!((discriminant(&p, c(0.0, 0.0)).unwrap() - want).norm() < 1e-12 * want.norm());
    let r = solve_r(&p, c(0.0, 0.0)).unwrap().to_array();
    for i in 0..3 {
        for j in 0..i {
            assert!((r[i] - r[j]).norm() > 0.1);
        }
    }
}

#[test]
fn cleared_discriminant_is_g4_times_monic() {
    let p = FamilyParams::new(0.35, -0.2, 1.3).unwrap();
    let xi = c(0.4, 0.9);
    let g = poly_g(&p, xi);
    let lhs = discriminant_cleared(&p, xi);
    let rhs = g.powu(4) * discriminant(&p, xi).unwrap();
    assert!((lhs - rhs).norm() < 1e-12 * lhs.norm());
}

#[test]
fn scherk_limit_examples() {
    assert_eq!(scherk_limit_r(ScherkKind::Doubly, c(0.0, 0.0)).unwrap(), c(2.0, 0.0));
    assert_eq!(scherk_limit_r(ScherkKind::Singly, c(0.0, 0.0)).unwrap(), c(0.0, 2.0));
    // |xi^4 R| = 2 / |1 + xi^-2 + xi^-4|, which deviates from 2 by at most
    // 2 |xi|^-2 and by far less along the diagonal
    for k in 0..16 {
        let xi = C::from_polar(1e3, k as f64 * PI / 8.0);
        let r = scherk_limit_r(ScherkKind::Doubly, xi).unwrap();
        assert!(((xi.powu(4) * r).norm() - 2.0).abs() < 2.0e-6 + 1e-12);
    }
    let xi = C::from_polar(1e3, PI / 4.0);
    let r = scherk_limit_r(ScherkKind::Doubly, xi).unwrap();
    assert!(((xi.powu(4) * r).norm() - 2.0).abs() < 1e-6);
    let pole = C::from_polar(1.0, PI / 3.0);
    assert!(scherk_limit_r(ScherkKind::Doubly, pole).is_err());
}

#[test]
fn scherk_limit_is_the_anchor_sheet_of_the_cubic() {
    let p = FamilyParams::scherk(0.0);
    let w = Weierstrass::new(p);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let xi = C::from_polar(rng.gen_range(0.0..0.9), rng.gen_range(0.0..2.0 * PI));
        let want = scherk_limit_r(ScherkKind::Doubly, xi).unwrap();
        let best = w
            .unit_roots(xi)
            .iter()
            .map(|r| (r - want).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(best < 1e-10 * want.norm());
    }
}

#[test]
fn structures_for_three_sheets() {
    let s = feasible_branch_structures(3, 12);
    let shown: Vec<String> = s.iter().map(|b| b.to_string()).collect();
    assert_eq!(shown, vec!["{{0,0},{1,0},{2,6}}", "{{0,12},{1,12},{2,0}}"]);
}

/// Brute force: every vector of copy counts per point, filtered by the two sums.
fn brute_structures(sheets: usize, total: usize) -> Vec<Vec<usize>> {
    let mut found = Vec::new();
    let mut n = vec![0usize; sheets];
    loop {
        let pinned: usize = n.iter().enumerate().map(|(b, k)| k * (b + 1)).sum();
        let order: usize = n.iter().enumerate().map(|(b, k)| k * b).sum();
        if pinned == sheets && order > 0 && total.is_multiple_of(order) {
            let points = total / order;
            found.push(n.iter().map(|k| k * points).collect());
        }
        let mut i = 0;
        loop {
            if i == sheets {
                return found;
            }
            n[i] += 1;
            if n[i] <= sheets {
                break;
            }
            n[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn structures_match_brute_force() {
    for (s, w) in [(2, 8), (3, 12), (4, 16), (3, 6)] {
        let mut got: Vec<Vec<usize>> = feasible_branch_structures(s, w).into_iter().map(|b| b.counts).collect();
        let mut want = brute_structures(s, w);
        got.sort();
        want.sort();
        assert_eq!(got, want, "s={s} W={w}");
    }
    let two = feasible_branch_structures(2, 8);
    assert_eq!(two.len(), 1);
    assert_eq!(two[0].counts, vec![0, 8]);
    let none = feasible_branch_structures(3, 0);
    assert_eq!(none.len(), 1);
    assert_eq!(none[0].counts, vec![0, 0, 0]);
}

fn roots_at(w: &Weierstrass, xi: C) -> Vec<C> {
    w.unit_roots(xi).to_vec()
}

fn params_strategy() -> impl Strategy<Value = (f64, f64, f64, f64, f64)> {
    (0.02f64..0.9, -0.5f64..0.5, 0.0f64..TAU, 0.05f64..2.5, 0.0f64..TAU)
}

proptest! {
    #[test]
    fn branch_set_is_even((d, e, t, _, _) in params_strategy()) {
        let bp = branch_points(&FamilyParams::new(d, e, t).unwrap());
        for z in bp.iter() {
            let (_, dist) = bp.nearest(-z);
            prop_assert!(dist < 1e-13);
        }
    }

    #[test]
    fn branch_set_closed_under_horizontal_twofolds((d, e, t, _, _) in params_strategy(), k in 0usize..6) {
        let bp = branch_points(&FamilyParams::new(d, e, t).unwrap());
        let phi = k as f64 * PI / 6.0;
        for z in bp.iter() {
            let image = C::from_polar(1.0, -2.0 * phi) / z;
            let (_, dist) = bp.nearest(image);
            prop_assert!(dist < 1e-12 * (1.0 + image.norm()));
        }
    }

    #[test]
    fn roots_are_even((d, e, t, r, a) in params_strategy()) {
        let w = Weierstrass::new(FamilyParams::new(d, e, t).unwrap());
        let xi = C::from_polar(r, a);
        let scale = roots_at(&w, xi).iter().map(|v| v.norm()).fold(0.0, f64::max);
        prop_assert!(multiset_distance(&roots_at(&w, xi), &roots_at(&w, -xi)) < 1e-9 * scale);
    }

    #[test]
    fn coefficients_covariant_under_horizontal_twofolds((d, e, t, r, a) in params_strategy(), k in 0usize..6) {
        let p = FamilyParams::new(d, e, t).unwrap();
        let w = Weierstrass::new(p);
        let z = p.zeta();
        let coef = |x: C| [-2.0 * z.powu(3) * w.g_at_i(), 3.0 * z * z * w.g_at_i() * x * x, C::new(0.0, 0.0), w.g(x)];
        let phi = k as f64 * PI / 6.0;
        let xi = C::from_polar(r, a);
        let image = C::from_polar(1.0, -2.0 * phi) / xi;
        let (lhs, rhs) = (coef(image), coef(xi));
        for m in [0usize, 1, 3] {
            let l = xi.powu(4 * m as u32) * lhs[m];
            let r = C::from_polar(1.0, -4.0 * phi * m as f64) * rhs[m];
            prop_assert!((l - r).norm() < 1e-10 * r.norm().max(l.norm()));
        }
    }

    #[test]
    fn screw_covariance((d, e, t, r, a) in params_strategy()) {
        let w = Weierstrass::new(FamilyParams::new(d, e, t).unwrap());
        let xi = C::from_polar(r, a);
        let turned: Vec<C> = roots_at(&w, OMEGA * xi).iter().map(|v| v * C::from_polar(1.0, 4.0 * PI / 3.0)).collect();
        let here = roots_at(&w, xi);
        let scale = here.iter().map(|v| v.norm()).fold(0.0, f64::max);
        prop_assert!(multiset_distance(&turned, &here) < 1e-9 * scale);
    }

    #[test]
    fn negated_roots_solve_chiral_partner((d, e, t, r, a) in params_strategy()) {
        let p = FamilyParams::new(d, e, t).unwrap();
        let xi = C::from_polar(r, a);
        let Ok(roots) = solve_r(&p, xi) else { return Ok(()) };
        let (pc, qc) = Weierstrass::new(p).coefficients(xi).unwrap();
        for v in roots.to_array() {
            let m = -v;
            let res = (m * m * m + pc * m - qc).norm() / qc.norm().max((m * m * m).norm());
            prop_assert!(res < 1e-10);
        }
    }

    #[test]
    fn roots_decay_like_inverse_fourth_power((d, e, t, _, a) in params_strategy()) {
        let w = Weierstrass::new(FamilyParams::new(d, e, t).unwrap());
        let scaled = |radius: f64| {
            let xi = C::from_polar(radius, a);
            let mut v: Vec<f64> = roots_at(&w, xi).iter().map(|r| xi.norm().powi(4) * r.norm()).collect();
            v.sort_by(f64::total_cmp);
            v
        };
        let (s2, s3, s4) = (scaled(1e2), scaled(1e3), scaled(1e4));
        for k in 0..3 {
            let early = (s2[k] - s3[k]).abs();
            let late = (s3[k] - s4[k]).abs();
            prop_assert!(late < 1e-4 * s4[k]);
            prop_assert!(late <= early + 1e-12 * s4[k]);
        }
    }
}

#[test]
fn shifted_g_matches_direct_evaluation() {
    let params = FamilyParams::new(0.3, -0.1, 1.0).unwrap();
    let f = Weierstrass::new(params);
    for index in 0..12 {
        let shifted = f.g_about(index).unwrap();
        let b = shifted.center;
        for off in [c(0.3, -0.2), c(-0.05, 0.01), c(0.0, 0.7)] {
            let direct = f.g(b + off);
            assert!((shifted.eval(off) - direct).norm() < 1e-12 * (1.0 + direct.norm()));
        }
        // Linear behaviour right at the branch point.
        let tiny = c(1e-14, 2e-14);
        let lin = f.dg(b) * tiny;
        assert!((shifted.eval(tiny) - lin).norm() < 1e-10 * lin.norm());
    }
}
