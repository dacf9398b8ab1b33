//! Numerical probes of a smooth body built from the unit ball `U ⊂ R^{n−1}`
//! and the perturbed ball
//! `M = {x : x₁² + ⋯ + x_{n−2}² + (x_{n−1} − t f(x₁, …, x_{n−2}))² ≤ 1}`
//! with `f(x) = (x₁ − 1)·exp(Σ_{j=2}^{n−2} (x_j³ + j x_j))`.
//!
//! Everything here is floating point evidence, not proof. The exact entry
//! point [`residual_system_exact`] covers the points where `exp` is not
//! needed.

use nalgebra::{DMatrix, DVector};
use num_complex::{Complex64, ComplexFloat};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::rational::{RVec, Rational};
use crate::smooth::perp_basis;

/// Default `t`, the largest value on the grid 0.1, 0.05, 0.03, 0.02 that
/// passes the convexity pre-check for `n = 4`, `v = (1, 1)`.
pub const DEFAULT_T: f64 = 0.02;
/// Boundary samples used by the strict convexity pre-check.
pub const CONVEXITY_SAMPLES: usize = 1000;
/// Newton converged solutions closer than this are merged.
pub const CLUSTER_RADIUS: f64 = 1e-6;
/// Accepted solutions have residual norm below this.
pub const SOLUTION_TOL: f64 = 1e-10;
/// Upper bound on `body_l_sample` resolution.
pub const MAX_RESOLUTION: usize = 10_000;

const NEWTON_ITERATIONS: usize = 1000;
/// Iterates leaving this box count as diverged; `exp` overflows soon after.
const ESCAPE_RADIUS: f64 = 10.0;
const COMPLEX_STEP: f64 = 1e-30;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AppendixParams {
    pub n: usize,
    pub t: f64,
    /// `(v₂, …, v_{n−1})`.
    pub v: Vec<f64>,
}

impl AppendixParams {
    pub fn new(n: usize, t: f64, v: Vec<f64>) -> Result<Self> {
        if n < 4 {
            return Err(Error::UnsupportedDimension(n));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Invalid("t must be positive".into()));
        }
        if v.len() != n - 2 {
            return Err(Error::DimensionMismatch { expected: n - 2, found: v.len() });
        }
        if v.iter().all(|c| *c == 0.0) {
            return Err(Error::ZeroDirection);
        }
        Ok(AppendixParams { n, t, v })
    }

    /// Samples the second fundamental form of `∂M` at boundary points drawn
    /// from a fixed seed.
    pub fn convexity_check(&self, samples: usize) -> ConvexityCheck {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let min_curvature = (0..samples)
            .map(|_| {
                let a = self.boundary_point(&random_sphere(&mut rng, self.n - 1));
                self.tangential_min_eigenvalue(&a)
            })
            .fold(f64::INFINITY, f64::min);
        ConvexityCheck { samples, min_curvature, strictly_convex: min_curvature > 0.0 }
    }

    /// The point of `∂M` over `y ∈ S^{n−2}`: `a_j = y_j` for `j ≤ n−2` and
    /// `a_{n−1} = y_{n−1} + t f(a)`.
    pub fn boundary_point(&self, y: &[f64]) -> Vec<f64> {
        let mut a = y.to_vec();
        let last = self.n - 2;
        a[last] = y[last] + self.t * f_app(&y[..last]);
        a
    }

    fn tangential_min_eigenvalue(&self, a: &[f64]) -> f64 {
        let grad = DVector::from_vec(quadric_gradient(a, self));
        let basis = perp_basis(grad.normalize().as_slice());
        let h = basis.transpose() * quadric_hessian(a, self) * &basis;
        h.symmetric_eigenvalues().min()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexityCheck {
    pub samples: usize,
    /// Smallest eigenvalue of the defining function's Hessian restricted to
    /// the tangent spaces of `∂M`.
    pub min_curvature: f64,
    pub strictly_convex: bool,
}

fn c<T: ComplexFloat>(x: f64) -> T {
    T::from(x).expect("finite constant")
}

fn exponent<T: ComplexFloat>(x: &[T]) -> T {
    (1..x.len()).fold(T::zero(), |acc, i| {
        let j = c::<T>((i + 1) as f64);
        acc + x[i] * x[i] * x[i] + j * x[i]
    })
}

fn f_generic<T: ComplexFloat>(x: &[T]) -> T {
    (x[0] - T::one()) * exponent(x).exp()
}

fn df_generic<T: ComplexFloat>(x: &[T]) -> Vec<T> {
    let e = exponent(x).exp();
    (0..x.len())
        .map(|i| if i == 0 { e } else { (x[0] - T::one()) * e * (c::<T>(3.0) * x[i] * x[i] + c::<T>((i + 1) as f64)) })
        .collect()
}

/// `f(x)` for `x ∈ R^{n−2}`.
pub fn f_app(x: &[f64]) -> f64 {
    f_generic(x)
}

/// `∇f(x)`.
pub fn f_app_gradient(x: &[f64]) -> Vec<f64> {
    df_generic(x)
}

/// `∇²f(x)`.
pub fn f_app_hessian(x: &[f64]) -> DMatrix<f64> {
    let m = x.len();
    let e = exponent(x).exp();
    let w = |i: usize| 3.0 * x[i] * x[i] + (i + 1) as f64;
    DMatrix::from_fn(m, m, |i, k| match (i, k) {
        (0, 0) => 0.0,
        (0, k) => e * w(k),
        (i, 0) => e * w(i),
        (i, k) => (x[0] - 1.0) * e * (w(i) * w(k) + if i == k { 6.0 * x[i] } else { 0.0 }),
    })
}

fn residual_generic<T: ComplexFloat>(a: &[T], p: &AppendixParams) -> [T; 3] {
    let m = p.n - 2;
    let x = &a[..m];
    let t = c::<T>(p.t);
    let f = f_generic(x);
    let df = df_generic(x);
    let shifted = a[m] - t * f;
    let sphere = x.iter().fold(T::zero(), |acc, &xi| acc + xi * xi) + shifted * shifted - T::one();
    let linear = (1..=m).fold(T::zero(), |acc, i| acc + c::<T>(p.v[i - 1]) * a[i]);
    let slope = (1..m).fold(T::zero(), |acc, i| acc + c::<T>(p.v[i - 1]) * df[i]);
    let third = slope * shifted + c::<T>(p.v[m - 1]) * f;
    [sphere, linear, third]
}

fn check_len(a: &[f64], p: &AppendixParams) {
    assert_eq!(a.len(), p.n - 1, "point must have length n - 1");
}

/// Residuals of the sphere equation, the linear equation
/// `v₂a₂ + ⋯ + v_{n−1}a_{n−1} = 0` and the product-form tangency equation.
pub fn residual_system(a: &[f64], p: &AppendixParams) -> [f64; 3] {
    check_len(a, p);
    residual_generic(a, p)
}

/// Jacobian of [`residual_system`] by complex steps.
pub fn residual_jacobian(a: &[f64], p: &AppendixParams) -> DMatrix<f64> {
    check_len(a, p);
    let mut jac = DMatrix::zeros(3, a.len());
    for k in 0..a.len() {
        let z: Vec<Complex64> =
            a.iter().enumerate().map(|(i, &x)| Complex64::new(x, if i == k { COMPLEX_STEP } else { 0.0 })).collect();
        let r = residual_generic(&z, p);
        for row in 0..3 {
            jac[(row, k)] = r[row].im / COMPLEX_STEP;
        }
    }
    jac
}

/// Exact residuals over the rationals. Available where the exponential
/// factor is not needed: `a₁ = 1` (so `f` and `∂_j f`, `j ≥ 2`, vanish) or
/// `a₂ = ⋯ = a_{n−2} = 0` (so the exponential is 1).
pub fn residual_system_exact(a: &[Rational], n: usize, t: &Rational, v: &[Rational]) -> Result<[Rational; 3]> {
    if n < 4 {
        return Err(Error::UnsupportedDimension(n));
    }
    if a.len() != n - 1 {
        return Err(Error::DimensionMismatch { expected: n - 1, found: a.len() });
    }
    if v.len() != n - 2 {
        return Err(Error::DimensionMismatch { expected: n - 2, found: v.len() });
    }
    let m = n - 2;
    let one = Rational::one();
    let (f, df_tail): (Rational, RVec) = if a[0] == one {
        (Rational::zero(), vec![Rational::zero(); m - 1])
    } else if a[1..m].iter().all(Zero::is_zero) {
        let scale = &a[0] - &one;
        let tail = (2..=m).map(|j| &scale * Rational::from_integer((j as i64).into())).collect();
        (scale, tail)
    } else {
        return Err(Error::NotExact);
    };
    let shifted = &a[m] - t * &f;
    let sphere = a[..m].iter().map(|x| x * x).sum::<Rational>() + &shifted * &shifted - &one;
    let linear = (1..=m).map(|i| &v[i - 1] * &a[i]).sum::<Rational>();
    let slope = (1..m).map(|i| &v[i - 1] * &df_tail[i - 1]).sum::<Rational>();
    let third = slope * &shifted + &v[m - 1] * &f;
    Ok([sphere, linear, third])
}

/// `Q(a) = a₁² + ⋯ + a_{n−2}² + (a_{n−1} − t f(a))² − 1`, the defining
/// function of `M`.
pub fn quadric(a: &[f64], p: &AppendixParams) -> f64 {
    residual_system(a, p)[0]
}

fn quadric_gradient(a: &[f64], p: &AppendixParams) -> Vec<f64> {
    gamma_map_raw(a, p).iter().map(|g| 2.0 * g).collect()
}

fn quadric_hessian(a: &[f64], p: &AppendixParams) -> DMatrix<f64> {
    let m = p.n - 2;
    let x = &a[..m];
    let df = f_app_gradient(x);
    let hf = f_app_hessian(x);
    let shifted = a[m] - p.t * f_app(x);
    DMatrix::from_fn(m + 1, m + 1, |i, k| match (i == m, k == m) {
        (true, true) => 2.0,
        (true, false) => -2.0 * p.t * df[k],
        (false, true) => -2.0 * p.t * df[i],
        (false, false) => {
            let d = if i == k { 2.0 } else { 0.0 };
            d + 2.0 * p.t * p.t * df[i] * df[k] - 2.0 * shifted * p.t * hf[(i, k)]
        }
    })
}

fn gamma_map_raw(a: &[f64], p: &AppendixParams) -> Vec<f64> {
    let m = p.n - 2;
    let x = &a[..m];
    let df = f_app_gradient(x);
    let shifted = a[m] - p.t * f_app(x);
    (0..m).map(|j| a[j] - shifted * p.t * df[j]).chain([shifted]).collect()
}

/// Gradient of `Q` by complex steps.
pub fn quadric_gradient_cs(a: &[f64], p: &AppendixParams) -> Vec<f64> {
    residual_jacobian(a, p).row(0).iter().copied().collect()
}

/// `‖ĝ ∧ ŵ‖` for the unit vectors along `Γ(a)` and `∇Q(a)`.
pub fn parallel_residual(a: &[f64], p: &AppendixParams) -> f64 {
    let g = DVector::from_vec(gamma_map_raw(a, p));
    let w = DVector::from_vec(quadric_gradient_cs(a, p));
    let (g, w) = (g.normalize(), w.normalize());
    (&g - &w * g.dot(&w)).norm()
}

/// `Γ(a)`, a normal vector of `M` at `a ∈ ∂M`.
pub fn gamma_map(a: &[f64], p: &AppendixParams) -> Vec<f64> {
    check_len(a, p);
    let gamma = gamma_map_raw(a, p);
    debug_assert!(
        gamma.iter().all(|g| *g == 0.0) || parallel_residual(a, p) < 1e-8,
        "Γ must be parallel to the quadric gradient"
    );
    gamma
}

fn random_sphere(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if r > 0.1 && r <= 1.0 {
            return v.iter().map(|c| c / r).collect();
        }
    }
}

/// Undamped Newton iteration with least-squares steps. Returns the final
/// iterate when its residual norm is below [`SOLUTION_TOL`].
fn newton(start: Vec<f64>, p: &AppendixParams) -> Option<Vec<f64>> {
    let mut a = start;
    for _ in 0..NEWTON_ITERATIONS {
        let r = DVector::from_row_slice(&residual_system(&a, p));
        let jac = residual_jacobian(&a, p);
        if !r.iter().chain(jac.iter()).all(|x| x.is_finite()) {
            return None;
        }
        let step = jac.svd(true, true).solve(&r, 1e-14).ok()?;
        for (x, s) in a.iter_mut().zip(step.iter()) {
            *x -= s;
        }
        if !a.iter().all(|x| x.is_finite() && x.abs() < ESCAPE_RADIUS) {
            return None;
        }
        if step.norm() < 1e-15 {
            break;
        }
    }
    let r = residual_system(&a, p);
    (r.iter().map(|x| x * x).sum::<f64>().sqrt() < SOLUTION_TOL).then_some(a)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cluster {
    pub a: Vec<f64>,
    pub residual: f64,
    /// Number of converged starts in the cluster.
    pub hits: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub n: usize,
    pub v: Vec<f64>,
    pub t: f64,
    pub seed: u64,
    pub seeds: usize,
    pub converged: usize,
    pub diverged: usize,
    /// More than 80% of the starts failed to converge.
    pub divergence_warning: bool,
    pub clusters: Vec<Cluster>,
    /// Least-squares slope of `log N(ε)` against `log(1/ε)` for
    /// `ε = 2⁻⁴, …, 2⁻¹²`. Heuristic.
    pub box_dim: f64,
    pub convexity: ConvexityCheck,
    pub heuristic: bool,
}

/// Newton refinement of the residual system from `seeds` uniform starts in
/// `[−1, 1]^{n−1}`, followed by clustering. Start `k` draws from stream `k`
/// of a ChaCha8 generator seeded with `seed`, so the report does not depend
/// on thread scheduling.
pub fn dimension_probe(p: &AppendixParams, seeds: usize, seed: u64) -> Result<ProbeReport> {
    if p.n != 4 {
        return Err(Error::UnsupportedDimension(p.n));
    }
    let solutions: Vec<Option<Vec<f64>>> = (0..seeds)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let start: Vec<f64> = (0..p.n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
            newton(start, p)
        })
        .collect();
    let mut accepted: Vec<Vec<f64>> = solutions.iter().flatten().cloned().collect();
    let converged = accepted.len();
    accepted.sort_by(|x, y| x.iter().zip(y).map(|(a, b)| a.total_cmp(b)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));

    let norm = |a: &[f64]| residual_system(a, p).iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut clusters: Vec<Cluster> = Vec::new();
    for a in &accepted {
        match clusters.iter_mut().find(|c| dist(&c.a, a) < CLUSTER_RADIUS) {
            Some(c) => {
                c.hits += 1;
                let r = norm(a);
                if r < c.residual {
                    c.a = a.clone();
                    c.residual = r;
                }
            }
            None => clusters.push(Cluster { a: a.clone(), residual: norm(a), hits: 1 }),
        }
    }
    let diverged = seeds - converged;
    Ok(ProbeReport {
        n: p.n,
        v: p.v.clone(),
        t: p.t,
        seed,
        seeds,
        converged,
        diverged,
        divergence_warning: diverged * 5 > seeds * 4,
        box_dim: box_counting_slope(&accepted),
        clusters,
        convexity: p.convexity_check(CONVEXITY_SAMPLES),
        heuristic: true,
    })
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Slope of `log N(ε)` against `log(1/ε)` over `ε = 2⁻⁴, …, 2⁻¹²`, where
/// `N(ε)` counts occupied grid boxes of side `ε`.
pub fn box_counting_slope(points: &[Vec<f64>]) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let samples: Vec<(f64, f64)> = (4..=12)
        .map(|k| {
            let eps = 0.5f64.powi(k);
            let boxes: std::collections::BTreeSet<Vec<i64>> =
                points.iter().map(|p| p.iter().map(|x| (x / eps).floor() as i64).collect()).collect();
            ((1.0 / eps).ln(), (boxes.len() as f64).ln())
        })
        .collect();
    let m = samples.len() as f64;
    let (sx, sy) = samples.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let cov: f64 = samples.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = samples.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    cov / var
}

/// Denominator of the rational rounding in [`body_l_sample`].
const GRID: i64 = 1 << 20;

fn to_rational(x: f64) -> Rational {
    Rational::new(((x * GRID as f64).round() as i64).into(), GRID.into())
}

/// Fibonacci lattice on `S²`, skipping points within `1e−6` of `e₁` in the
/// first coordinate so that rounding cannot push them onto `⟨e₁,·⟩ = 1`.
fn fibonacci_sphere(count: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            [z, r * phi.cos(), r * phi.sin()]
        })
        .filter(|p| p[0] < 1.0 - 1e-6)
        .collect()
}

/// Rational polytope approximating `conv(M − e₄, U + e₄)` in `R⁴` from
/// `resolution` boundary samples split between the two pieces, plus the
/// exact points `e₁ ± e₄`.
pub fn body_l_sample(p: &AppendixParams, resolution: usize) -> Result<Polytope> {
    if p.n != 4 {
        return Err(Error::UnsupportedDimension(p.n));
    }
    if resolution > MAX_RESOLUTION {
        return Err(Error::ResolutionTooLarge(resolution));
    }
    let sphere = fibonacci_sphere(resolution / 2);
    let mut points: Vec<RVec> = Vec::with_capacity(2 * sphere.len() + 2);
    for y in &sphere {
        let a = p.boundary_point(y);
        points.push(a.iter().map(|&x| to_rational(x)).chain([to_rational(-1.0)]).collect());
        points.push(y.iter().map(|&x| to_rational(x)).chain([to_rational(1.0)]).collect());
    }
    let one = Rational::one;
    let zero = Rational::zero;
    points.push(vec![one(), zero(), zero(), -one()]);
    points.push(vec![one(), zero(), zero(), one()]);
    Polytope::hull(&points, 4)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BodyLChecks {
    pub vertex_count: usize,
    pub has_endpoints: bool,
    /// Dimension of `F(L, e₁)`.
    pub e1_face_dim: usize,
    /// `F(L, e₁)` is exactly `[e₁ − e₄, e₁ + e₄]`.
    pub e1_face_is_segment: bool,
    pub origin_interior: bool,
}

/// Sanity checks on a sampled `L`.
pub fn body_l_checks(l: &Polytope) -> Result<BodyLChecks> {
    let e1 = Direction::axis(4, 0);
    let r = |x: i64| Rational::from_integer(x.into());
    let lo = vec![r(1), r(0), r(0), r(-1)];
    let hi = vec![r(1), r(0), r(0), r(1)];
    let has_endpoints = l.vertices().contains(&lo) && l.vertices().contains(&hi);
    let mut face_vertices: Vec<RVec> = l.face_indices(&e1).into_iter().map(|i| l.vertices()[i].clone()).collect();
    face_vertices.sort();
    Ok(BodyLChecks {
        vertex_count: l.vertices().len(),
        has_endpoints,
        e1_face_dim: l.face_dim(&e1),
        e1_face_is_segment: face_vertices == vec![lo, hi],
        origin_interior: l.has_interior_origin(),
    })
}

#[cfg(test)]
mod tests;
