use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{area_atoms_in, check_tuple, mixed_volume_interpolated, mixed_volume_measure, SphereMeasure};
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::polytope::{HyperplaneChart, Polytope};
use crate::rational::{rat, sub, RVec, Rational};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositivityReport {
    /// `𝖵ₙ(C₁, …, Cₙ) > 0`.
    pub positive: bool,
    /// Segments `Iᵢ ⊆ Cᵢ` (start point and direction) with independent
    /// directions.
    #[serde(serialize_with = "crate::json::ser_segments")]
    pub witness: Option<Vec<(RVec, Direction)>>,
    /// A set `I` (0-based) with `dim Σ_{i∈I} Cᵢ < |I|`.
    pub failing_set: Option<Vec<usize>>,
}

/// Independent segment directions, one per body, chosen among vertex
/// differences; `None` if no such choice exists.
pub(crate) fn segment_witness(bodies: &[&Polytope]) -> Option<Vec<(RVec, Direction)>> {
    let n = bodies[0].ambient_dim();
    let options: Vec<Vec<(RVec, RVec)>> = bodies
        .iter()
        .map(|b| {
            let vs = b.vertices();
            vs.iter()
                .enumerate()
                .flat_map(|(i, a)| vs[i + 1..].iter().map(move |c| (a.clone(), sub(c, a))))
                .collect()
        })
        .collect();
    fn search(options: &[Vec<(RVec, RVec)>], n: usize, chosen: &mut Vec<(RVec, RVec)>) -> bool {
        let k = chosen.len();
        if k == options.len() {
            return true;
        }
        for opt in &options[k] {
            chosen.push(opt.clone());
            let dirs: Vec<RVec> = chosen.iter().map(|(_, d)| d.clone()).collect();
            if rank(&dirs, n) == dirs.len() && search(options, n, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    if search(&options, n, &mut chosen) {
        Some(
            chosen
                .into_iter()
                .map(|(p, d)| (p, Direction::from_rationals(&d).expect("segment is nondegenerate")))
                .collect(),
        )
    } else {
        None
    }
}

/// Dimension of `Σ_{i∈I} Cᵢ`.
pub(crate) fn sum_dim(bodies: &[&Polytope], subset: &[usize]) -> usize {
    let n = bodies[0].ambient_dim();
    let rows: Vec<RVec> = subset.iter().flat_map(|&i| bodies[i].direction_space()).collect();
    rank(&rows, n)
}

/// Positivity of `𝖵ₙ(C₁, …, Cₙ)` with both kinds of certificate.
pub fn positivity(bodies: &[Polytope]) -> Result<PositivityReport> {
    check_tuple(bodies, |n| n)?;
    let refs: Vec<&Polytope> = bodies.iter().collect();
    let positive = mixed_volume_measure(&refs).is_positive();
    let witness = segment_witness(&refs);
    let failing_set = (1..=refs.len())
        .flat_map(|k| (0..refs.len()).combinations(k))
        .find(|subset| sum_dim(&refs, subset) < subset.len());
    Ok(PositivityReport { positive, witness, failing_set })
}

/// A support function or a formal difference of two.
#[derive(Clone, Copy, Debug)]
pub enum SupportArg<'a> {
    Body(&'a Polytope),
    Difference(&'a Polytope, &'a Polytope),
}

/// `∫ f dS` for `f = h_K` or `f = h_K − h_L`.
pub fn integrate_support(f: SupportArg<'_>, s: &SphereMeasure) -> Result<Rational> {
    let check = |k: &Polytope| {
        if k.ambient_dim() == s.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: s.dim(), found: k.ambient_dim() })
        }
    };
    match f {
        SupportArg::Body(k) => {
            check(k)?;
            Ok(s.integrate(k))
        }
        SupportArg::Difference(k, l) => {
            check(k)?;
            check(l)?;
            Ok(s.atoms().iter().map(|(w, q)| (k.support_value(w) - l.support_value(w)) * q).sum())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotonicityReport {
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub lhs: Rational,
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub rhs: Rational,
    /// `𝖵ₙ(K, C) = 𝖵ₙ(L, C)`.
    pub equal: bool,
    /// `h_K = h_L` at every atom of `S_C`.
    pub support_agreement: bool,
    /// Atom directions where the support functions differ.
    pub differing: Vec<Direction>,
}

/// Compares `𝖵ₙ(K, C)` with `𝖵ₙ(L, C)` for `K ⊆ L`.
pub fn monotonicity_equality(k: &Polytope, l: &Polytope, c: &[Polytope]) -> Result<MonotonicityReport> {
    let mut all = vec![k.clone()];
    all.extend(c.iter().cloned());
    check_tuple(&all, |n| n)?;
    if l.ambient_dim() != k.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: k.ambient_dim(), found: l.ambient_dim() });
    }
    if !l.contains_polytope(k) {
        return Err(Error::NotContained);
    }
    let with = |body: &Polytope| {
        let mut refs: Vec<&Polytope> = vec![body];
        refs.extend(c.iter());
        mixed_volume_interpolated(&refs)
    };
    let lhs = with(k);
    let rhs = with(l);
    let crefs: Vec<&Polytope> = c.iter().collect();
    let s = area_atoms_in(k.ambient_dim(), &crefs);
    let differing: Vec<Direction> = s
        .support()
        .into_iter()
        .filter(|w| k.support_value(w) != l.support_value(w))
        .collect();
    Ok(MonotonicityReport { equal: lhs == rhs, lhs, rhs, support_agreement: differing.is_empty(), differing })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AfReport {
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub mixed: Rational,
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub lhs: Rational,
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub rhs: Rational,
    pub holds: bool,
    pub equality: bool,
    /// Whether `S_{K,C} = (𝖵(K,K,C)/𝖵(K,L,C))·S_{L,C}`; only evaluated when
    /// `𝖵(K,L,C) > 0`.
    pub proportional: Option<bool>,
}

impl AfReport {
    /// The inequality holds and, when `𝖵(K,L,C) > 0`, equality occurs exactly
    /// when the measures are proportional.
    pub fn consistent(&self) -> bool {
        self.holds && self.proportional.map_or(true, |p| p == self.equality)
    }
}

/// Alexandrov–Fenchel inequality for `(K, L, C₁, …, Cₙ₋₂)`.
pub fn af_check(k: &Polytope, l: &Polytope, c: &[Polytope]) -> Result<AfReport> {
    let mut all = vec![k.clone(), l.clone()];
    all.extend(c.iter().cloned());
    let n = check_tuple(&all, |n| n)?;
    let mv = |a: &Polytope, b: &Polytope| {
        let mut refs: Vec<&Polytope> = vec![a, b];
        refs.extend(c.iter());
        mixed_volume_measure(&refs)
    };
    let mixed = mv(k, l);
    let kk = mv(k, k);
    let ll = mv(l, l);
    let lhs = &mixed * &mixed;
    let rhs = &kk * &ll;
    let proportional = if mixed.is_positive() {
        let measure_with = |a: &Polytope| {
            let mut refs: Vec<&Polytope> = vec![a];
            refs.extend(c.iter());
            area_atoms_in(n, &refs)
        };
        let sk = measure_with(k);
        let sl = measure_with(l);
        Some(sk == sl.scaled(&(&kk / &mixed)))
    } else {
        None
    };
    Ok(AfReport { holds: lhs >= rhs, equality: lhs == rhs, mixed, lhs, rhs, proportional })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionReport {
    /// `n·𝖵ₙ([0,v], C₁, …, Cₙ₋₁)` and the chart value of
    /// `𝖵ₙ₋₁(P C₁, …, P Cₙ₋₁)` times `|det[B | v]|`.
    #[serde(serialize_with = "crate::json::ser_rational_pair")]
    pub volume: Option<(Rational, Rational)>,
    /// Atom scales of `(n−1)·S_{[0,v],C}` and of the projected measure
    /// re-embedded in `v^⊥`, both relative to the primitive direction.
    #[serde(serialize_with = "crate::json::ser_scale_map_pair")]
    pub measure: (BTreeMap<Direction, Rational>, BTreeMap<Direction, Rational>),
}

impl ProjectionReport {
    pub fn holds(&self) -> bool {
        self.volume.as_ref().map_or(true, |(a, b)| a == b) && self.measure.0 == self.measure.1
    }
}

/// Projection formulas for mixed volumes and mixed area measures along `v`.
///
/// With `n − 1` bodies both the volume identity and the measure identity
/// (for the first `n − 2` bodies) are checked; with `n − 2` bodies only the
/// measure identity.
pub fn projection_identities(c: &[Polytope], v: &Direction) -> Result<ProjectionReport> {
    let n = v.dim();
    if n < 2 || n > crate::polytope::MAX_DIM {
        return Err(Error::UnsupportedDimension(n));
    }
    if let Some(b) = c.iter().find(|b| b.ambient_dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: b.ambient_dim() });
    }
    if c.len() + 1 != n && c.len() + 2 != n {
        return Err(Error::Invalid(format!("expected {} or {} bodies", n - 2, n - 1)));
    }
    let seg = Polytope::segment(v);
    let chart = HyperplaneChart::new(v)?;
    let projected: Vec<Polytope> = c.iter().map(|b| chart.project(b)).collect::<Result<_>>()?;

    let volume = if c.len() + 1 == n {
        let mut refs: Vec<&Polytope> = vec![&seg];
        refs.extend(c.iter());
        let lhs = mixed_volume_measure(&refs) * rat(n as i64);
        let prefs: Vec<&Polytope> = projected.iter().collect();
        let rhs = mixed_volume_measure(&prefs) * chart.det_bv();
        Some((lhs, rhs))
    } else {
        None
    };

    let m = n - 2;
    let mut refs: Vec<&Polytope> = vec![&seg];
    refs.extend(c[..m].iter());
    let left: BTreeMap<Direction, Rational> = area_atoms_in(n, &refs)
        .atoms()
        .iter()
        .map(|(w, q)| (w.clone(), q * rat(n as i64 - 1)))
        .collect();
    let prefs: Vec<&Polytope> = projected[..m].iter().collect();
    let right: BTreeMap<Direction, Rational> = area_atoms_in(n - 1, &prefs)
        .atoms()
        .iter()
        .map(|(d, q)| {
            let u = chart.dir_from_chart(d);
            let raw = chart.embed_functional(d);
            // raw = s·u with s > 0.
            let j = u.coords().iter().position(|x| !x.is_zero()).expect("nonzero direction");
            let s = &raw[j] / Rational::from_integer(u.coords()[j].clone());
            (u, q * chart.det_bv() * s)
        })
        .collect();
    Ok(ProjectionReport { volume, measure: (left, right) })
}
