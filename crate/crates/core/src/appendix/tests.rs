use std::f64::consts::E;

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::rational::rat;

fn params(t: f64, v: &[f64]) -> AppendixParams {
    AppendixParams::new(v.len() + 2, t, v.to_vec()).unwrap()
}

fn e1(n: usize) -> Vec<f64> {
    let mut a = vec![0.0; n - 1];
    a[0] = 1.0;
    a
}

fn central_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    let h = 1e-6;
    (0..x.len())
        .map(|i| {
            let (mut p, mut m) = (x.to_vec(), x.to_vec());
            p[i] += h;
            m[i] -= h;
            (f(&p) - f(&m)) / (2.0 * h)
        })
        .collect()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + y.abs()))
}

#[test]
fn f_app_examples() {
    for n in 4..=7 {
        let x = &e1(n)[..n - 2];
        assert_eq!(f_app(x), 0.0);
        let g = f_app_gradient(x);
        assert_eq!(g[0], 1.0);
        assert!(g[1..].iter().all(|d| *d == 0.0));
    }
    assert!((f_app(&[0.0, 1.0]) + E.powi(3)).abs() < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for m in 2..=4 {
        for _ in 0..30 {
            let x: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
            assert!(close(&f_app_gradient(&x), &central_gradient(f_app, &x), 1e-6));
            let hess = f_app_hessian(&x);
            for i in 0..m {
                let row = central_gradient(|y| f_app_gradient(y)[i], &x);
                assert!(close(hess.row(i).iter().copied().collect::<Vec<_>>().as_slice(), &row, 1e-6));
            }
        }
    }
}

#[test]
fn residual_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 4..=6 {
        for _ in 0..20 {
            let v: Vec<f64> = (0..n - 2).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let p = params(rng.gen_range(0.001..0.5), &v);
            assert_eq!(residual_system(&e1(n), &p), [0.0, 0.0, 0.0]);
        }
    }

    let t: f64 = 0.1;
    let p = params(t, &[0.0, 1.0]);
    let r = residual_system(&[0.0, 1.0, 0.0], &p);
    assert!((r[0] - t * t * E.powi(6)).abs() < 1e-12);
    assert!((r[0] - 4.034287934927351).abs() < 1e-12);
    assert_eq!(r[1], 0.0);
    assert!((r[2] + E.powi(3)).abs() < 1e-12);
}

#[test]
fn exact_residuals() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 4..=6 {
        for _ in 0..20 {
            let v: Vec<Rational> = (0..n - 2).map(|_| Rational::new(rng.gen_range(-9..10).into(), rng.gen_range(1..7).into())).collect();
            let t = Rational::new(rng.gen_range(1..20).into(), 100.into());
            let mut a = vec![Rational::zero(); n - 1];
            a[0] = rat(1);
            assert!(residual_system_exact(&a, n, &t, &v).unwrap().iter().all(Zero::is_zero));
        }
    }

    // On the slice a₂ = ⋯ = a_{n−2} = 0, f = a₁ − 1, and the rational point
    // (3/5, 0, …, 0, 4/5 + t(3/5 − 1)) lies on ∂M.
    for n in 4..=6 {
        let t = Rational::new(1.into(), 10.into());
        let mut a = vec![Rational::zero(); n - 1];
        a[0] = Rational::new(3.into(), 5.into());
        a[n - 2] = Rational::new(4.into(), 5.into()) + &t * (&a[0] - rat(1));
        let v: Vec<Rational> = (0..n - 2).map(|i| rat(i as i64 + 1)).collect();
        let exact = residual_system_exact(&a, n, &t, &v).unwrap();
        assert!(exact[0].is_zero());
        let pf = params(0.1, &v.iter().map(|q| q.to_f64().unwrap()).collect::<Vec<_>>());
        let af: Vec<f64> = a.iter().map(|q| q.to_f64().unwrap()).collect();
        let float = residual_system(&af, &pf);
        for (x, q) in float.iter().zip(&exact) {
            assert!((x - q.to_f64().unwrap()).abs() < 1e-12);
        }
    }

    let a = vec![rat(0), rat(1), rat(0)];
    assert_eq!(residual_system_exact(&a, 4, &rat(1), &[rat(1), rat(1)]), Err(Error::NotExact));
    assert!(residual_system_exact(&a, 3, &rat(1), &[rat(1)]).is_err());
}

#[test]
fn gamma_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 4..=6 {
        let v: Vec<f64> = (0..n - 2).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let p = params(0.1, &v);
        assert_eq!(gamma_map(&e1(n), &p), e1(n));
        let flat = AppendixParams { n, t: 0.0, v: v.clone() };
        for _ in 0..20 {
            let a: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
            assert_eq!(gamma_map(&a, &flat), a);
        }
    }
}

#[test]
fn gamma_is_normal_to_the_quadric() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [4, 5] {
        let p = params(0.05, &vec![1.0; n - 2]);
        for _ in 0..200 {
            let mut y: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let r = y.iter().map(|c| c * c).sum::<f64>().sqrt();
            y.iter_mut().for_each(|c| *c /= r);
            let a = p.boundary_point(&y);
            assert!(quadric(&a, &p).abs() < 1e-12);
            assert!(parallel_residual(&a, &p) < 1e-8);
            let gamma = gamma_map(&a, &p);
            let oracle = central_gradient(|x| quadric(x, &p), &a);
            let doubled: Vec<f64> = gamma.iter().map(|g| 2.0 * g).collect();
            assert!(close(&doubled, &oracle, 1e-5), "{doubled:?} {oracle:?}");
        }
    }
}

#[test]
fn convexity_precheck() {
    let curvature = |t: f64| params(t, &[1.0, 1.0]).convexity_check(CONVEXITY_SAMPLES);
    assert!(curvature(DEFAULT_T).strictly_convex);
    assert!(curvature(0.005).strictly_convex);
    assert!(!curvature(0.1).strictly_convex);

    // The closed-form quadric Hessian used by the check against differences
    // of the complex-step gradient.
    let p = params(0.1, &[1.0, 1.0]);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..30 {
        let a: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let h = quadric_hessian(&a, &p);
        for i in 0..3 {
            let row = central_gradient(|x| quadric_gradient_cs(x, &p)[i], &a);
            assert!(close(&h.row(i).iter().copied().collect::<Vec<_>>(), &row, 1e-5));
        }
    }
}

/// Roots of the one-variable reduction for `n = 4`, `v₃ ≠ 0`: with
/// `D = v₂(3a₂² + 2)`, solutions other than `e₁` satisfy
/// `a₁ = g(a₂) = 1 + (v₃/D − v₂a₂/v₃)·exp(−a₂³ − 2a₂)/t`,
/// `a₃ = −v₂a₂/v₃` and `h(a₂) = 1 − g² − a₂² − v₃²/D² = 0`.
fn reduced_roots(t: f64, v2: f64, v3: f64) -> Vec<[f64; 3]> {
    let d = |x: f64| v2 * (3.0 * x * x + 2.0);
    let g = |x: f64| 1.0 + (v3 / d(x) - v2 * x / v3) * (-(x * x * x) - 2.0 * x).exp() / t;
    let h = |x: f64| 1.0 - g(x).powi(2) - x * x - v3 * v3 / d(x).powi(2);
    let steps = 200_000;
    let grid: Vec<f64> = (0..=steps).map(|k| -1.0 + 2.0 * k as f64 / steps as f64).collect();
    let mut roots = Vec::new();
    for w in grid.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        if h(lo) == 0.0 || h(lo).signum() == h(hi).signum() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h(mid).signum() == h(lo).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let x = 0.5 * (lo + hi);
        roots.push([g(x), x, -v2 * x / v3]);
    }
    roots
}

fn has_cluster_near(report: &ProbeReport, point: &[f64], tol: f64) -> bool {
    report.clusters.iter().any(|c| dist(&c.a, point) < tol)
}

#[test]
fn dimension_probe_examples() {
    let p = params(0.1, &[1.0, 1.0]);
    let report = dimension_probe(&p, 10_000, 7).unwrap();
    assert!(has_cluster_near(&report, &e1(4), 1e-6));
    assert!(report.clusters.len() < 50);
    assert!(report.clusters.iter().all(|c| c.residual < SOLUTION_TOL));
    assert!(report.box_dim.abs() < 0.05);
    assert!(!report.divergence_warning);
    assert!(!report.convexity.strictly_convex);

    let roots = reduced_roots(0.1, 1.0, 1.0);
    assert!(!roots.is_empty());
    for root in &roots {
        assert!(has_cluster_near(&report, root, 1e-6), "{root:?} missing from {:?}", report.clusters);
    }
    for cluster in &report.clusters {
        let is_e1 = dist(&cluster.a, &e1(4)) < 1e-6;
        assert!(is_e1 || roots.iter().any(|r| dist(r, &cluster.a) < 1e-6), "{cluster:?}");
    }

    let p = params(0.05, &[0.0, 1.0]);
    let report = dimension_probe(&p, 10_000, 7).unwrap();
    assert!(has_cluster_near(&report, &e1(4), 1e-6));
    assert!(report.clusters.len() < 50);
    assert!(report.clusters.iter().all(|c| c.residual < SOLUTION_TOL));

    assert_eq!(dimension_probe(&params(0.1, &[1.0, 1.0, 1.0]), 10, 0), Err(Error::UnsupportedDimension(5)));
}

#[test]
fn dimension_probe_is_deterministic_and_monotone() {
    let p = params(DEFAULT_T, &[1.0, 1.0]);
    let a = dimension_probe(&p, 2_000, 11).unwrap();
    let b = dimension_probe(&p, 2_000, 11).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let c = dimension_probe(&p, 4_000, 11).unwrap();
    assert!(c.clusters.len() + 1 >= a.clusters.len());

    let json = serde_json::to_value(&a).unwrap();
    for key in ["n", "v", "t", "clusters", "box_dim"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert!(json["clusters"][0].get("a").is_some() && json["clusters"][0].get("residual").is_some());
}

#[test]
fn box_counting_on_known_sets() {
    assert_eq!(box_counting_slope(&[vec![0.1, 0.2], vec![0.7, -0.3]]), 0.0);
    let segment: Vec<Vec<f64>> = (0..20_000).map(|k| vec![k as f64 / 20_000.0, 0.3]).collect();
    assert!((box_counting_slope(&segment) - 1.0).abs() < 0.05);
}

#[test]
fn body_l_sample_checks() {
    let p = params(DEFAULT_T, &[1.0, 1.0]);
    let l = body_l_sample(&p, 300).unwrap();
    let checks = body_l_checks(&l).unwrap();
    assert!(checks.has_endpoints);
    assert_eq!(checks.e1_face_dim, 1);
    assert!(checks.e1_face_is_segment);
    assert!(checks.origin_interior);
    assert_eq!(l.support_value(&Direction::axis(4, 0)), rat(1));

    assert_eq!(body_l_sample(&p, MAX_RESOLUTION + 1), Err(Error::ResolutionTooLarge(MAX_RESOLUTION + 1)));
    assert_eq!(body_l_sample(&params(0.1, &[1.0, 1.0, 1.0]), 100), Err(Error::UnsupportedDimension(5)));
}
