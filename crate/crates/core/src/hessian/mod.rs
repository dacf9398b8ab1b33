//! Piecewise-affine convex functions `f = maxᵢ(⟨aᵢ, ·⟩ − bᵢ)`, their
//! conjugates and lifts `K_f`, and mixed Hessian measures.
//!
//! The mixed Hessian measure is computed from the mixed area measure of the
//! lifts through the sphere map `x ↦ (x, −1)`, and independently by
//! polarizing Monge–Ampère measures of partial sums.

mod function;
mod measure;

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use function::{Piece, PiecewiseAffineConvex};
pub use measure::PlaneMeasure;

use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::extremality::independent_transversal;
use crate::linalg::{kernel, rank, rref, solve};
use crate::mixed::area_atoms_in;
use crate::polytope::{Halfspace, Polytope};
use crate::rational::{dot, rat, RVec, Rational};

/// `f*(y) = ⟨slope, y⟩ + constant` on one cell of `dom f*`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjugatePiece {
    #[serde(serialize_with = "crate::json::ser_rvec")]
    pub slope: RVec,
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub constant: Rational,
}

/// The conjugate `f*` on `dom f* = conv{aᵢ}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Conjugate {
    pub domain: Polytope,
    /// `(aᵢ, f*(aᵢ))` for the distinct slopes.
    #[serde(serialize_with = "crate::json::ser_point_values")]
    pub values: Vec<(RVec, Rational)>,
    pub pieces: Vec<ConjugatePiece>,
    /// `r_f`: the largest value of `f*` at a vertex of its domain.
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub cap: Rational,
}

impl Conjugate {
    /// `f*(y)`, or `None` outside the domain.
    pub fn value(&self, y: &[Rational]) -> Option<Rational> {
        if !self.domain.contains(y) {
            return None;
        }
        self.pieces.iter().map(|p| dot(&p.slope, y) + &p.constant).max()
    }

    /// `f**(x) = max_y ⟨x, y⟩ − f*(y)`; the maximum is attained at a slope.
    pub fn biconjugate(&self, x: &[Rational]) -> Rational {
        self.values.iter().map(|(a, s)| dot(a, x) - s).max().expect("at least one slope")
    }
}

fn check_lift_dim(n: usize) -> Result<()> {
    if n + 1 > crate::polytope::MAX_DIM {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(())
}

/// Box corners, the center and vertices of the crease arrangement inside
/// the box.
fn probe_points(f: &PiecewiseAffineConvex) -> Vec<RVec> {
    let dom = f.domain();
    let mut pts: Vec<RVec> = dom.iter().map(|(lo, hi)| [lo.clone(), hi.clone()]).multi_cartesian_product().collect();
    pts.push(dom.iter().map(|(lo, hi)| (lo + hi) / rat(2)).collect());
    pts.extend(crease_vertices(&[f]).into_iter().filter(|x| f.in_domain(x)));
    pts
}

pub fn conjugate(f: &PiecewiseAffineConvex) -> Result<Conjugate> {
    let n = f.dim();
    check_lift_dim(n)?;
    let lifted: Vec<RVec> = f
        .pieces()
        .iter()
        .map(|p| {
            let mut v = p.a.clone();
            v.push(p.b.clone());
            v
        })
        .collect();
    let p = Polytope::hull(&lifted, n + 1)?;
    let vertical_free = p.affine_complement().iter().all(|c| c.last().is_zero());
    let pieces: Vec<ConjugatePiece> = if vertical_free {
        p.facets()
            .iter()
            .filter(|fc| fc.normal.last().is_negative())
            .map(|fc| {
                let c = fc.normal.to_rationals();
                let last = &c[n];
                ConjugatePiece { slope: c[..n].iter().map(|x| -x / last).collect(), constant: &fc.offset / last }
            })
            .collect()
    } else {
        let c = p
            .affine_complement()
            .iter()
            .find(|c| !c.last().is_zero())
            .expect("some normal of the affine hull is not horizontal")
            .to_rationals();
        let last = &c[n];
        let level = dot(&c, &p.vertices()[0]);
        vec![ConjugatePiece { slope: c[..n].iter().map(|x| -x / last).collect(), constant: level / last }]
    };
    let slopes: BTreeSet<RVec> = f.pieces().iter().map(|p| p.a.clone()).collect();
    let values: Vec<(RVec, Rational)> = slopes
        .into_iter()
        .map(|a| {
            let s = pieces.iter().map(|pc| dot(&pc.slope, &a) + &pc.constant).max().expect("nonempty");
            (a, s)
        })
        .collect();
    let domain = Polytope::hull(&values.iter().map(|(a, _)| a.clone()).collect::<Vec<_>>(), n)?;
    let cap = values
        .iter()
        .filter(|(a, _)| domain.vertices().contains(a))
        .map(|(_, s)| s.clone())
        .max()
        .expect("domain has a vertex");
    let conj = Conjugate { domain, values, pieces, cap };
    for x in probe_points(f) {
        assert_eq!(conj.biconjugate(&x), f.eval(&x), "biconjugate differs from f");
    }
    Ok(conj)
}

/// `K_f`, the epigraph of `f*` truncated at height `r_f`.
pub fn lift_body(f: &PiecewiseAffineConvex) -> Result<Polytope> {
    let conj = conjugate(f)?;
    let cap = conj.cap.clone();
    lift_with(f, &conj, &cap)
}

/// `K_f` truncated at `cap ≥ r_f` instead of `r_f`.
pub fn lift_body_capped(f: &PiecewiseAffineConvex, cap: &Rational) -> Result<Polytope> {
    let conj = conjugate(f)?;
    if *cap < conj.cap {
        return Err(Error::Invalid("cap lies below r_f".into()));
    }
    lift_with(f, &conj, cap)
}

const SUPPORT_PROBES: usize = 100;

fn lift_with(f: &PiecewiseAffineConvex, conj: &Conjugate, cap: &Rational) -> Result<Polytope> {
    let n = f.dim();
    let mut pts: Vec<RVec> = conj
        .values
        .iter()
        .map(|(a, s)| {
            let mut v = a.clone();
            v.push(s.clone());
            v
        })
        .collect();
    for v in conj.domain.vertices() {
        let mut top = v.clone();
        top.push(cap.clone());
        pts.push(top);
    }
    let k = Polytope::hull(&pts, n + 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..SUPPORT_PROBES {
        let x: RVec = f
            .domain()
            .iter()
            .map(|(lo, hi)| lo + (hi - lo) * Rational::new(rng.gen_range(0..=64).into(), 64.into()))
            .collect();
        assert_eq!(f.eval(&x), support_at(&k, &x), "support identity fails");
    }
    Ok(k)
}

/// `h_K((x, −1))` for a rational point `x`.
fn support_at(k: &Polytope, x: &[Rational]) -> Rational {
    let mut w = x.to_vec();
    w.push(-Rational::one());
    k.support_value_rational(&w)
}

/// The primitive ray of `(x, −1)`.
pub fn sphere_map(x: &[Rational]) -> Direction {
    let mut w = x.to_vec();
    w.push(-Rational::one());
    Direction::from_rationals(&w).expect("last coordinate is nonzero")
}

/// `−(w₁, …, wₙ)/wₙ₊₁` for `wₙ₊₁ < 0`.
pub fn sphere_map_inv(w: &Direction) -> Result<RVec> {
    if !w.is_negative_last() {
        return Err(Error::UpperHemisphere);
    }
    let r = w.to_rationals();
    let (last, head) = r.split_last().expect("nonempty");
    Ok(head.iter().map(|x| -x / last).collect())
}

fn check_functions(fs: &[PiecewiseAffineConvex]) -> Result<usize> {
    let n = fs.first().ok_or(Error::Empty)?.dim();
    if let Some(f) = fs.iter().find(|f| f.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: f.dim() });
    }
    if fs.len() != n {
        return Err(Error::Invalid(format!("expected {n} functions, got {}", fs.len())));
    }
    check_lift_dim(n)?;
    Ok(n)
}

/// `H_{f₁,…,fₙ}` from the lower-hemisphere atoms of `S_{K_{f₁},…,K_{fₙ}}`.
pub fn mixed_hessian_atoms(fs: &[PiecewiseAffineConvex]) -> Result<PlaneMeasure> {
    let n = check_functions(fs)?;
    let bodies: Vec<Polytope> = fs.iter().map(lift_body).collect::<Result<_>>()?;
    Ok(hessian_from_bodies(n, &bodies))
}

pub(crate) fn hessian_from_bodies(n: usize, bodies: &[Polytope]) -> PlaneMeasure {
    let refs: Vec<&Polytope> = bodies.iter().collect();
    let sphere = area_atoms_in(n + 1, &refs);
    let mut plane = PlaneMeasure::new(n);
    for (w, q) in sphere.atoms() {
        if let Ok(x) = sphere_map_inv(w) {
            plane.insert(x, q * Rational::from_integer(w.last().abs()));
        }
    }
    plane
}

/// Hyperplanes where two pieces of one function tie.
fn creases(fs: &[&PiecewiseAffineConvex]) -> Vec<Halfspace> {
    let mut out: BTreeSet<(Direction, Rational)> = BTreeSet::new();
    for f in fs {
        for (p, q) in f.pieces().iter().tuple_combinations() {
            let diff: RVec = p.a.iter().zip(&q.a).map(|(x, y)| x - y).collect();
            if let Ok(d) = Direction::from_rationals(&diff) {
                let j = diff.iter().position(|x| !x.is_zero()).expect("nonzero difference");
                let offset = (&p.b - &q.b) * Rational::from_integer(d.coords()[j].clone()) / &diff[j];
                out.insert((d, offset));
            }
        }
    }
    out.into_iter().map(|(d, t)| Halfspace::new(d.to_rationals(), t)).collect()
}

/// Points where `n` independent creases meet.
fn crease_vertices(fs: &[&PiecewiseAffineConvex]) -> Vec<RVec> {
    let n = fs[0].dim();
    let cs = creases(fs);
    let found: BTreeSet<RVec> = cs
        .iter()
        .combinations(n)
        .par_bridge()
        .filter_map(|sel| {
            let m: Vec<RVec> = sel.iter().map(|h| h.normal.clone()).collect();
            let b: RVec = sel.iter().map(|h| h.offset.clone()).collect();
            if rank(&m, n) < n {
                return None;
            }
            solve(&m, &b)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    found.into_iter().collect()
}

/// `H_{f₁,…,fₙ}` by polarization: `(1/n!) Σ_I (−1)^{n−|I|} MA(f_I)`, where
/// `MA(g)({x}) = Vol(∂g(x))` at the vertices of the cell complex.
pub fn ma_oracle(fs: &[PiecewiseAffineConvex]) -> Result<PlaneMeasure> {
    let n = check_functions(fs)?;
    let refs: Vec<&PiecewiseAffineConvex> = fs.iter().collect();
    let subsets: Vec<Vec<usize>> = (1..=n).flat_map(|k| (0..n).combinations(k)).collect();
    let fact: Rational = (1..=n as i64).map(rat).product();
    let masses: Vec<(RVec, Rational)> = crease_vertices(&refs)
        .into_par_iter()
        .map(|x| {
            let subdiffs: Vec<Polytope> = fs.iter().map(|f| f.subdifferential(&x)).collect();
            let total: Rational = subsets
                .iter()
                .map(|subset| {
                    let parts: Vec<&Polytope> = subset.iter().map(|&i| &subdiffs[i]).collect();
                    let v = Polytope::sum_all(&parts).expect("same dimension").volume();
                    if (n - subset.len()) % 2 == 0 {
                        v
                    } else {
                        -v
                    }
                })
                .sum();
            (x, total / &fact)
        })
        .collect();
    let mut plane = PlaneMeasure::new(n);
    for (x, m) in masses {
        plane.insert(x, m);
    }
    Ok(plane)
}

/// `L(f, x)` clipped to the domain box, with the linear span of `L(f, x) − x`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AffineCell {
    #[serde(serialize_with = "crate::json::ser_rvec")]
    pub base: RVec,
    pub cell: Polytope,
    #[serde(serialize_with = "crate::json::ser_rvecs")]
    pub direction_space: Vec<RVec>,
}

impl AffineCell {
    pub fn dim(&self) -> usize {
        self.direction_space.len()
    }
}

pub fn affine_cell(f: &PiecewiseAffineConvex, x: &[Rational]) -> Result<AffineCell> {
    let n = f.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    if !f.in_domain(x) {
        return Err(Error::OutsideDomain);
    }
    let active = f.active(x);
    let pieces = f.pieces();
    let base = &pieces[active[0]];
    let relative = |i: usize| -> Halfspace {
        let normal: RVec = pieces[i].a.iter().zip(&base.a).map(|(p, q)| p - q).collect();
        Halfspace::new(normal, &pieces[i].b - &base.b)
    };
    let eqs: Vec<Halfspace> = active[1..].iter().map(|&i| relative(i)).collect();
    let mut ineqs: Vec<Halfspace> = (0..pieces.len()).filter(|i| !active.contains(i)).map(relative).collect();
    for (j, (lo, hi)) in f.domain().iter().enumerate() {
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::one();
        ineqs.push(Halfspace::new(e.clone(), hi.clone()));
        e[j] = -Rational::one();
        ineqs.push(Halfspace::new(e, -lo));
    }
    let cell = Polytope::from_halfspaces(n, &ineqs, &eqs)?;
    let direction_space = kernel(&f.active_differences(x), n);
    Ok(AffineCell { base: x.to_vec(), cell, direction_space })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FcnVerdict {
    #[serde(serialize_with = "crate::json::ser_rvec")]
    pub point: RVec,
    pub extreme: bool,
    /// Index sets (0-based) with `dim L̄(f_I, x)^⊥ < |I|`.
    pub failing_sets: Vec<Vec<usize>>,
    /// Independent line directions in `L̄(fᵢ, x)^⊥`, one per function.
    pub line_witness: Option<Vec<Direction>>,
}

/// A tuple of functions with all partial sums.
struct FunctionTuple<'a> {
    n: usize,
    fs: Vec<&'a PiecewiseAffineConvex>,
    sums: Vec<(Vec<usize>, PiecewiseAffineConvex)>,
}

impl<'a> FunctionTuple<'a> {
    fn new(fs: Vec<&'a PiecewiseAffineConvex>) -> Result<Self> {
        let n = fs[0].dim();
        let m = fs.len();
        let sums = (1..=m)
            .flat_map(|k| (0..m).combinations(k))
            .map(|subset| {
                let parts: Vec<&PiecewiseAffineConvex> = subset.iter().map(|&i| fs[i]).collect();
                PiecewiseAffineConvex::sum_all(&parts).map(|s| (subset, s))
            })
            .collect::<Result<_>>()?;
        Ok(FunctionTuple { n, fs, sums })
    }

    fn domain_contains(&self, x: &[Rational]) -> bool {
        self.fs.iter().all(|f| f.in_domain(x))
    }

    fn verdict(&self, x: &[Rational]) -> FcnVerdict {
        let n = self.n;
        let perps: Vec<Vec<RVec>> = self.fs.iter().map(|f| rref(&f.active_differences(x), n).0).collect();
        let mut failing_sets = Vec::new();
        for (subset, sum) in &self.sums {
            let rows: Vec<RVec> = subset.iter().flat_map(|&i| perps[i].iter().cloned()).collect();
            let from_cells = rank(&rows, n);
            let from_sum = rank(&sum.active_differences(x), n);
            assert_eq!(from_cells, from_sum, "cell of a sum differs from the intersection of cells");
            if from_sum < subset.len() {
                failing_sets.push(subset.clone());
            }
        }
        let line_witness = independent_transversal(&perps, n);
        let extreme = failing_sets.is_empty();
        assert_eq!(extreme, line_witness.is_some(), "line witness disagrees with extremality");
        FcnVerdict { point: x.to_vec(), extreme, failing_sets, line_witness }
    }
}

fn check_point(fs: &[PiecewiseAffineConvex], x: &[Rational]) -> Result<()> {
    let n = fs[0].dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    if !fs.iter().all(|f| f.in_domain(x)) {
        return Err(Error::OutsideDomain);
    }
    Ok(())
}

pub fn fcn_classify(fs: &[PiecewiseAffineConvex], x: &[Rational]) -> Result<FcnVerdict> {
    check_functions(fs)?;
    check_point(fs, x)?;
    Ok(FunctionTuple::new(fs.iter().collect())?.verdict(x))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FcnSchneiderReport {
    pub functions: Vec<PiecewiseAffineConvex>,
    #[serde(serialize_with = "crate::json::ser_rvecs")]
    pub atom_points: Vec<RVec>,
    #[serde(serialize_with = "crate::json::ser_rvecs")]
    pub extreme_points: Vec<RVec>,
    pub equal: bool,
    /// Every atom lies at an extreme point.
    pub included: bool,
    /// Equality for `n ≤ 2`, inclusion otherwise.
    pub holds: bool,
}

/// Atom locations of `H_{f₁,…,fₙ}` against the extreme points, both inside
/// the common domain box.
pub fn fcn_schneider_verify(fs: &[PiecewiseAffineConvex]) -> Result<FcnSchneiderReport> {
    let n = check_functions(fs)?;
    let tuple = FunctionTuple::new(fs.iter().collect())?;
    let atom_points: Vec<RVec> = mixed_hessian_atoms(fs)?
        .atoms()
        .iter()
        .filter(|(x, m)| m.is_positive() && tuple.domain_contains(x))
        .map(|(x, _)| x.clone())
        .collect();
    let refs: Vec<&PiecewiseAffineConvex> = fs.iter().collect();
    let extreme_points: Vec<RVec> = crease_vertices(&refs)
        .into_par_iter()
        .filter(|x| tuple.domain_contains(x) && tuple.verdict(x).extreme)
        .collect();
    let equal = atom_points == extreme_points;
    let included = atom_points.iter().all(|x| extreme_points.binary_search(x).is_ok());
    Ok(FcnSchneiderReport {
        functions: fs.to_vec(),
        atom_points,
        extreme_points,
        equal,
        included,
        holds: if n <= 2 { equal } else { included },
    })
}

/// The segment `I` through `x` on which `f` and `g` are both affine.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ruling {
    pub direction: Direction,
    /// Endpoints of the closure of `I` on the boundary of `D`.
    #[serde(serialize_with = "crate::json::ser_rvec")]
    pub start: RVec,
    #[serde(serialize_with = "crate::json::ser_rvec")]
    pub end: RVec,
}

/// The ruling through `x` for planar `f, g` with `H_{f,g}(D) = 0`, where `D`
/// is an open box.
pub fn ruling(
    f: &PiecewiseAffineConvex,
    g: &PiecewiseAffineConvex,
    d: &[(Rational, Rational)],
    x: &[Rational],
) -> Result<Ruling> {
    let fs = [f.clone(), g.clone()];
    if f.dim() != 2 {
        return Err(Error::UnsupportedDimension(f.dim()));
    }
    check_functions(&fs)?;
    if d.len() != 2 || x.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: if d.len() != 2 { d.len() } else { x.len() } });
    }
    let inside = |p: &[Rational]| p.iter().zip(d).all(|(c, (lo, hi))| lo < c && c < hi);
    if !inside(x) {
        return Err(Error::OutsideDomain);
    }
    if mixed_hessian_atoms(&fs)?.atoms().keys().any(|p| inside(p)) {
        return Err(Error::MeasureNonzero);
    }
    let lf = kernel(&f.active_differences(x), 2);
    let lg = kernel(&g.active_differences(x), 2);
    if lf.len() == 2 || lg.len() == 2 {
        return Err(Error::InPlanarRegion);
    }
    assert!(
        lf.len() == 1 && lg.len() == 1 && rank(&[lf[0].clone(), lg[0].clone()], 2) == 1,
        "cells at a non-extreme point outside R are parallel lines"
    );
    let mut dir = Direction::from_rationals(&lf[0]).expect("kernel vector is nonzero");
    if dir.coords().iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
        dir = dir.neg();
    }
    let dr = dir.to_rationals();
    let mut t_lo: Option<Rational> = None;
    let mut t_hi: Option<Rational> = None;
    for ((xc, dc), (lo, hi)) in x.iter().zip(&dr).zip(d) {
        if dc.is_zero() {
            continue;
        }
        let (a, b) = ((lo - xc) / dc, (hi - xc) / dc);
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        t_lo = Some(t_lo.map_or(a.clone(), |t| t.max(a)));
        t_hi = Some(t_hi.map_or(b.clone(), |t| t.min(b)));
    }
    let at = |t: &Rational| -> RVec { x.iter().zip(&dr).map(|(xc, dc)| xc + t * dc).collect() };
    let start = at(&t_lo.expect("direction is nonzero"));
    let end = at(&t_hi.expect("direction is nonzero"));
    for h in [f, g] {
        let active = h.active(x);
        for p in [&start, &end] {
            let there = h.active(p);
            assert!(active.iter().all(|i| there.contains(i)), "function is not affine along the ruling");
        }
    }
    Ok(Ruling { direction: dir, start, end })
}

#[cfg(test)]
mod tests;
