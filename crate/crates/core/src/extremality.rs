//! Extreme and exposed directions of tuples of polytopes and the support of
//! mixed area measures.
//!
//! For a tuple `(C₁, …, Cₙ₋₁)` and `I ⊆ [n−1]` write `C_I = Σ_{i∈I} Cᵢ`.
//! A direction `u` is extreme when `dim T(C_I, u)^⊥ ≥ |I|` for every `I`,
//! and exposed when the same holds with `N(C_I, F(C_I, u))` in place of the
//! touching cone.

use itertools::Itertools;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::mixed::{area_atoms_in, check_tuple};
use crate::polytope::{Face, HyperplaneChart, Polytope};
use crate::rational::{add, rat, scale, RVec, Rational};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalityVerdict {
    pub direction: Direction,
    pub extreme: bool,
    pub exposed: bool,
    /// Index sets (0-based) with `dim T(C_I, u)^⊥ < |I|`.
    pub failing_sets: Vec<Vec<usize>>,
    /// Independent line directions `Lᵢ ⊆ T(Cᵢ, u)^⊥`, one per body.
    pub line_witness: Option<Vec<Direction>>,
}

/// A tuple together with all of its partial sums.
struct Tuple<'a> {
    n: usize,
    bodies: Vec<&'a Polytope>,
    sums: Vec<(Vec<usize>, Polytope)>,
}

impl<'a> Tuple<'a> {
    fn new(n: usize, bodies: Vec<&'a Polytope>) -> Self {
        let m = bodies.len();
        let sums = (1..=m)
            .flat_map(|k| (0..m).combinations(k))
            .map(|subset| {
                let parts: Vec<&Polytope> = subset.iter().map(|&i| bodies[i]).collect();
                let sum = Polytope::sum_all(&parts).expect("bodies share a dimension");
                (subset, sum)
            })
            .collect();
        Tuple { n, bodies, sums }
    }

    fn full_sum(&self) -> Option<&Polytope> {
        self.sums.last().map(|(_, s)| s)
    }

    fn verdict(&self, u: &Direction) -> ExtremalityVerdict {
        let n = self.n;
        let failing_sets: Vec<Vec<usize>> = self
            .sums
            .iter()
            .filter(|(subset, sum)| n - sum.touching_cone(u).dim() < subset.len())
            .map(|(subset, _)| subset.clone())
            .collect();
        let exposed = self
            .sums
            .iter()
            .all(|(subset, sum)| n - sum.normal_cone_at(u).dim() >= subset.len());

        let perps: Vec<Vec<RVec>> = self
            .bodies
            .iter()
            .map(|b| b.touching_cone(u).orthogonal_complement())
            .collect();
        let span_condition = self.sums.iter().all(|(subset, _)| {
            let rows: Vec<RVec> = subset.iter().flat_map(|&i| perps[i].iter().cloned()).collect();
            rank(&rows, n) >= subset.len()
        });
        let line_witness = independent_transversal(&perps, n);

        let extreme = failing_sets.is_empty();
        assert_eq!(extreme, span_condition, "touching-cone and span characterizations disagree at {u}");
        assert_eq!(extreme, line_witness.is_some(), "line witness disagrees with extremality at {u}");
        assert_eq!(extreme, exposed, "extreme and exposed differ at {u} for polytopes");
        ExtremalityVerdict { direction: u.clone(), extreme, exposed, failing_sets, line_witness }
    }
}

/// One vector from each basis so that the chosen vectors are independent.
pub(crate) fn independent_transversal(bases: &[Vec<RVec>], n: usize) -> Option<Vec<Direction>> {
    fn search(bases: &[Vec<RVec>], n: usize, chosen: &mut Vec<RVec>) -> bool {
        let k = chosen.len();
        if k == bases.len() {
            return true;
        }
        for b in &bases[k] {
            chosen.push(b.clone());
            if rank(chosen, n) == chosen.len() && search(bases, n, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    search(bases, n, &mut chosen).then(|| {
        chosen
            .iter()
            .map(|b| Direction::from_rationals(b).expect("basis vector is nonzero"))
            .collect()
    })
}

fn check_direction(n: usize, u: &Direction) -> Result<()> {
    if u.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: u.dim() });
    }
    Ok(())
}

/// Classifies `u` for a tuple of `n − 1` polytopes in `R^n`.
pub fn classify(bodies: &[Polytope], u: &Direction) -> Result<ExtremalityVerdict> {
    let n = check_tuple(bodies, |n| n - 1)?;
    check_direction(n, u)?;
    Ok(Tuple::new(n, bodies.iter().collect()).verdict(u))
}

/// Classifies every direction in `us` against one tuple, sharing the partial
/// sums.
pub fn classify_all(bodies: &[Polytope], us: &[Direction]) -> Result<Vec<ExtremalityVerdict>> {
    let n = check_tuple(bodies, |n| n - 1)?;
    for u in us {
        check_direction(n, u)?;
    }
    let tuple = Tuple::new(n, bodies.iter().collect());
    Ok(us.par_iter().map(|u| tuple.verdict(u)).collect())
}

/// Extreme directions of the tuple, found among the rays of the normal fan
/// of `C₁ + ⋯ + Cₙ₋₁`.
pub fn extreme_set(bodies: &[Polytope]) -> Result<Vec<Direction>> {
    let n = check_tuple(bodies, |n| n - 1)?;
    Ok(extreme_set_in(&Tuple::new(n, bodies.iter().collect())))
}

fn extreme_set_in(tuple: &Tuple<'_>) -> Vec<Direction> {
    let rays = tuple.full_sum().map(Polytope::fan_rays).unwrap_or_default();
    rays.into_par_iter().filter(|u| tuple.verdict(u).extreme).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Discrepancy {
    pub direction: Direction,
    pub in_atom_support: bool,
    pub extreme: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchneiderReport {
    pub tuple: Vec<Polytope>,
    pub atom_support: Vec<Direction>,
    pub extreme_set: Vec<Direction>,
    pub equal: bool,
    pub discrepancies: Vec<Discrepancy>,
}

/// Compares the support of `S_{C₁,…,Cₙ₋₁}` with the extreme set.
pub fn schneider_verify(bodies: &[Polytope]) -> Result<SchneiderReport> {
    let n = check_tuple(bodies, |n| n - 1)?;
    let refs: Vec<&Polytope> = bodies.iter().collect();
    let measure = area_atoms_in(n, &refs);
    let atom_support: Vec<Direction> =
        measure.atoms().iter().filter(|(_, q)| q.is_positive()).map(|(w, _)| w.clone()).collect();
    let extreme = extreme_set_in(&Tuple::new(n, refs));
    let discrepancies: Vec<Discrepancy> = atom_support
        .iter()
        .chain(&extreme)
        .sorted()
        .dedup()
        .filter_map(|w| {
            let in_atom_support = atom_support.binary_search(w).is_ok();
            let is_extreme = extreme.binary_search(w).is_ok();
            (in_atom_support != is_extreme).then(|| Discrepancy {
                direction: w.clone(),
                in_atom_support,
                extreme: is_extreme,
            })
        })
        .collect();
    Ok(SchneiderReport {
        tuple: bodies.to_vec(),
        equal: discrepancies.is_empty(),
        atom_support,
        extreme_set: extreme,
        discrepancies,
    })
}

/// The tuple `(P C₁, …, P Cₘ)` in the chart of `v^⊥` and the chart direction
/// representing `u`.
fn project_tuple(c: &[Polytope], u: &Direction, v: &Direction) -> Result<(HyperplaneChart, Vec<Polytope>, Direction)> {
    let chart = HyperplaneChart::new(v)?;
    let projected = c.iter().map(|b| chart.project(b)).collect::<Result<Vec<_>>>()?;
    let d = chart.dir_to_chart(u)?;
    Ok((chart, projected, d))
}

fn check_kc(k: &Polytope, c: &[Polytope], u: &Direction) -> Result<usize> {
    let mut all = vec![k.clone()];
    all.extend(c.iter().cloned());
    let n = check_tuple(&all, |n| n - 1)?;
    check_direction(n, u)?;
    Ok(n)
}

/// Primitive integer combinations of `basis` with coefficients in `-2..=2`,
/// shortest first.
fn small_combinations(basis: &[RVec]) -> Vec<Direction> {
    let n = basis.first().map_or(0, Vec::len);
    let mut out: Vec<(i64, Direction)> = (0..basis.len())
        .map(|_| -2i64..=2)
        .multi_cartesian_product()
        .filter_map(|coeffs| {
            let mut x = vec![Rational::zero(); n];
            for (c, b) in coeffs.iter().zip(basis) {
                x = add(&x, &scale(b, &rat(*c)));
            }
            let weight: i64 = coeffs.iter().map(|c| c.abs()).sum();
            Direction::from_rationals(&x).ok().map(|d| (weight, d))
        })
        .collect();
    out.sort();
    out.into_iter().map(|(_, d)| d).dedup().collect()
}

/// A direction `v ∈ T(K, u)^⊥` such that `u` stays extreme for the
/// projections of `C₁, …, Cₙ₋₂` onto `v^⊥`.
pub fn projection_witness(k: &Polytope, c: &[Polytope], u: &Direction) -> Result<Direction> {
    let n = check_kc(k, c, u)?;
    let mut refs = vec![k];
    refs.extend(c.iter());
    let verdict = Tuple::new(n, refs).verdict(u);
    let Some(lines) = verdict.line_witness else {
        return Err(Error::NotExtreme(u.to_string()));
    };
    let perp = k.touching_cone(u).orthogonal_complement();
    let candidates = std::iter::once(lines[0].clone()).chain(small_combinations(&perp));
    for v in candidates {
        let (chart, projected, d) = project_tuple(c, u, &v)?;
        let tuple = Tuple::new(chart.dim(), projected.iter().collect());
        if tuple.verdict(&d).extreme {
            return Ok(v);
        }
    }
    Err(Error::Invalid(format!("no projection witness among small combinations for {u}")))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionSupportReport {
    /// `u` is an atom of `S_{P C₁, …, P Cₙ₋₂}` inside `v^⊥`.
    pub projected_atom: bool,
    /// `u` is an atom of `S_{K, C₁, …, Cₙ₋₂}`.
    pub full_atom: bool,
    pub implication_holds: bool,
}

/// Checks that an atom of the projected measure at `u` is also an atom of
/// `S_{K,C₁,…,Cₙ₋₂}` when `dim T(K, u) = 1`.
pub fn dim1_projection_support(
    k: &Polytope,
    c: &[Polytope],
    u: &Direction,
    v: &Direction,
) -> Result<ProjectionSupportReport> {
    let n = check_kc(k, c, u)?;
    check_direction(n, v)?;
    let t = k.touching_cone(u);
    if t.dim() != 1 {
        return Err(Error::TouchingConeDimension(t.dim()));
    }
    if !u.dot_dir(v).is_zero() {
        return Err(Error::NotOrthogonal);
    }
    let (chart, projected, d) = project_tuple(c, u, v)?;
    let prefs: Vec<&Polytope> = projected.iter().collect();
    let projected_atom = area_atoms_in(chart.dim(), &prefs).scale_at(&d).is_positive();
    let mut refs = vec![k];
    refs.extend(c.iter());
    let full_atom = area_atoms_in(n, &refs).scale_at(u).is_positive();
    Ok(ProjectionSupportReport { projected_atom, full_atom, implication_holds: !projected_atom || full_atom })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AreaSupportReport {
    pub atoms: Vec<Direction>,
    pub rays: Vec<Direction>,
    pub equal: bool,
}

/// Support of `S_{K[n−1]}` next to the directions with `dim T(K, u) = 1`.
pub fn area_support(k: &Polytope) -> Result<AreaSupportReport> {
    let n = k.ambient_dim();
    if !(2..=crate::polytope::MAX_DIM).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let refs = vec![k; n - 1];
    let atoms: Vec<Direction> = area_atoms_in(n, &refs)
        .atoms()
        .iter()
        .filter(|(_, q)| q.is_positive())
        .map(|(w, _)| w.clone())
        .collect();
    let rays: Vec<Direction> = k.fan_rays().into_iter().filter(|u| k.touching_cone(u).dim() == 1).collect();
    Ok(AreaSupportReport { equal: atoms == rays, atoms, rays })
}

/// `w` lies in the open cap `{‖w/‖w‖ − u/‖u‖‖ < ε}`.
pub fn in_cap(w: &Direction, u: &Direction, eps: &Rational) -> bool {
    let wu = Rational::from_integer(w.dot_dir(u));
    if !wu.is_positive() {
        return false;
    }
    let c = rat(1) - eps * eps / rat(2);
    let bound = &c * &c * Rational::from_integer(w.norm_sq() * u.norm_sq());
    c.is_negative() || &wu * &wu > bound
}

const MAX_HALVINGS: usize = 64;

/// A polytope `K′ ⊋ K` whose support function exceeds `h_K` exactly on an
/// open set of directions inside the `ε`-cap around `u`.
///
/// `K′ = conv(K ∪ {p})` with `p = c + s·u`, where `c` is the foot of the
/// origin on the supporting hyperplane when it lies in the relative interior
/// of `F(K, u)` and the vertex centroid of that face otherwise. For `c` on
/// the ray through `u` this is the polar of `K°` cut by a hyperplane normal
/// to `u`. The step `s` is halved until the normal cone of `K′` at `p` lies
/// inside the cap.
pub fn cap_extend(k: &Polytope, u: &Direction, eps: &Rational) -> Result<Polytope> {
    let n = k.ambient_dim();
    check_direction(n, u)?;
    if !eps.is_positive() {
        return Err(Error::Invalid("epsilon must be positive".into()));
    }
    let t = k.touching_cone(u);
    if t.dim() != 1 {
        return Err(Error::TouchingConeDimension(t.dim()));
    }
    if k.is_full_dim() && !k.has_interior_origin() {
        return Err(Error::OriginNotInterior);
    }
    let (h, face) = k.support(u);
    let ur = u.to_rationals();
    let foot = scale(&ur, &(&h / Rational::from_integer(u.norm_sq())));
    let base = if k.is_full_dim() && face_relint_contains(k, u, &foot) { foot } else { face.vertex_centroid() };
    let mut step = rat(1);
    for _ in 0..MAX_HALVINGS {
        let p = add(&base, &scale(&ur, &step));
        let beneath_others = k
            .facets()
            .iter()
            .filter(|f| &f.normal != u)
            .all(|f| f.normal.dot(&p) < f.offset);
        if beneath_others {
            let mut pts = k.vertices().to_vec();
            pts.push(p.clone());
            let extended = Polytope::hull(&pts, n)?;
            let apex = extended.vertices().iter().position(|x| *x == p).expect("apex is a vertex");
            let cone = extended.normal_cone(&Face { dim: 0, vertices: vec![apex] })?;
            if cone.lineality().is_empty() && cone.generators().iter().all(|w| in_cap(w, u, eps)) {
                return Ok(extended);
            }
        }
        step /= rat(2);
    }
    Err(Error::CapLeak)
}

/// Whether a point `x` of the supporting hyperplane lies in the relative
/// interior of the facet `F(K, u)`.
fn face_relint_contains(k: &Polytope, u: &Direction, x: &[Rational]) -> bool {
    k.support(u).1.facets().iter().all(|f| f.normal.dot(x) < f.offset)
}
