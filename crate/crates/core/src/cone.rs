//! Polyhedral cones `cone(generators) + lineality` in canonical form.
//!
//! The canonical form keeps the lineality space as the primitive rows of its
//! reduced row echelon basis and the generators as the primitive extreme rays
//! of the pointed part, taken orthogonal to the lineality space and sorted.
//! Two cones are equal exactly when their canonical forms are.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::linalg::{kernel, project_off_span, rank, rref, solve_columns};
use crate::rational::{dot, RVec, Rational};

#[derive(Clone, Debug)]
pub struct Cone {
    n: usize,
    generators: Vec<Direction>,
    lineality: Vec<Direction>,
    facets: OnceLock<Vec<Direction>>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.generators == other.generators && self.lineality == other.lineality
    }
}

impl Eq for Cone {}

fn rows_of(dirs: &[Direction]) -> Vec<RVec> {
    dirs.iter().map(Direction::to_rationals).collect()
}

/// Canonical basis of a subspace: primitive rows of its reduced echelon form.
pub fn canonical_subspace(rows: &[RVec], n: usize) -> Vec<Direction> {
    if rows.is_empty() {
        return Vec::new();
    }
    let (r, _) = rref(rows, n);
    r.iter()
        .map(|row| Direction::from_rationals(row).expect("echelon rows are nonzero"))
        .collect()
}

fn caratheodory_contains(gens: &[RVec], x: &[Rational]) -> bool {
    if x.iter().all(Zero::is_zero) {
        return true;
    }
    let n = x.len();
    let r = rank(gens, n);
    for k in 1..=r {
        for subset in (0..gens.len()).combinations(k) {
            let cols: Vec<RVec> = subset.iter().map(|&i| gens[i].clone()).collect();
            if let Some(lambda) = solve_columns(&cols, x) {
                if lambda.iter().all(|l| !l.is_negative()) {
                    return true;
                }
            }
        }
    }
    false
}

impl Cone {
    /// Builds the cone generated by `generators` plus the span of `lineality`,
    /// reducing to canonical form.
    pub fn new(n: usize, generators: &[RVec], lineality: &[RVec]) -> Result<Self> {
        for v in generators.iter().chain(lineality) {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: v.len() });
            }
        }
        let mut lin_rows: Vec<RVec> = lineality.to_vec();
        loop {
            let lin = canonical_subspace(&lin_rows, n);
            let lin_r = rows_of(&lin);
            let gens = Self::reduce_generators(generators, &lin_r);
            let gens_r = rows_of(&gens);
            let absorbed = (0..gens_r.len()).find(|&i| {
                let neg: RVec = gens_r[i].iter().map(|x| -x).collect();
                caratheodory_contains(&gens_r, &neg)
            });
            match absorbed {
                Some(i) => lin_rows.push(gens_r[i].clone()),
                None => {
                    let extreme = Self::extreme_only(n, gens, &lin);
                    return Ok(Cone::from_parts(n, extreme, lin));
                }
            }
        }
    }

    fn reduce_generators(generators: &[RVec], lin: &[RVec]) -> Vec<Direction> {
        let set: BTreeSet<Direction> = generators
            .iter()
            .filter_map(|g| Direction::from_rationals(&project_off_span(g, lin)).ok())
            .collect();
        set.into_iter().collect()
    }

    /// Drops generators that are not extreme rays of a pointed (modulo
    /// lineality) cone.
    fn extreme_only(n: usize, gens: Vec<Direction>, lin: &[Direction]) -> Vec<Direction> {
        if gens.len() <= 1 {
            return gens;
        }
        let probe = Cone::from_parts(n, gens.clone(), lin.to_vec());
        let p = probe.dim() - lin.len();
        let facets = rows_of(probe.facets());
        gens.into_iter()
            .filter(|g| {
                let gr = g.to_rationals();
                let tight: Vec<RVec> = facets
                    .iter()
                    .filter(|a| dot(a, &gr).is_zero())
                    .cloned()
                    .collect();
                rank(&tight, n) == p - 1
            })
            .collect()
    }

    /// Assembles a cone whose parts are already canonical apart from order.
    pub(crate) fn from_parts(n: usize, mut generators: Vec<Direction>, lineality: Vec<Direction>) -> Self {
        generators.sort();
        generators.dedup();
        Cone { n, generators, lineality, facets: OnceLock::new() }
    }

    /// Pointed-modulo-lineality cone from extreme rays; lineality is
    /// canonicalized and rays are projected onto its complement.
    pub(crate) fn from_extreme_rays(n: usize, rays: &[RVec], lineality: &[RVec]) -> Self {
        let lin = canonical_subspace(lineality, n);
        let gens = Self::reduce_generators(rays, &rows_of(&lin));
        Cone::from_parts(n, gens, lin)
    }

    pub fn subspace(n: usize, basis: &[RVec]) -> Self {
        Cone::from_parts(n, Vec::new(), canonical_subspace(basis, n))
    }

    pub fn ray(d: &Direction) -> Self {
        Cone::from_parts(d.dim(), vec![d.clone()], Vec::new())
    }

    /// `{x : eqs·x = 0, ineqs·x ≥ 0}` converted to generators.
    pub fn from_constraints(n: usize, eqs: &[RVec], ineqs: &[RVec]) -> Self {
        let ineqs: Vec<RVec> = ineqs
            .iter()
            .filter_map(|a| Direction::from_rationals(a).ok())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(|d| d.to_rationals())
            .collect();
        let w_dim = n - rank(eqs, n);
        let mut all: Vec<RVec> = eqs.to_vec();
        all.extend(ineqs.iter().cloned());
        let lin = kernel(&all, n);
        let p = w_dim - lin.len();
        if p == 0 {
            return Cone::subspace(n, &lin);
        }
        let mut base: Vec<RVec> = eqs.to_vec();
        base.extend(lin.iter().cloned());
        let mut rays: BTreeSet<Direction> = BTreeSet::new();
        for subset in (0..ineqs.len()).combinations(p - 1) {
            let mut rows = base.clone();
            rows.extend(subset.iter().map(|&i| ineqs[i].clone()));
            let k = kernel(&rows, n);
            if k.len() != 1 {
                continue;
            }
            let r = &k[0];
            let signs: Vec<Rational> = ineqs.iter().map(|a| dot(a, r)).collect();
            if signs.iter().all(|s| !s.is_negative()) {
                rays.insert(Direction::from_rationals(r).expect("kernel vector is nonzero"));
            } else if signs.iter().all(|s| !s.is_positive()) {
                let neg: RVec = r.iter().map(|x| -x).collect();
                rays.insert(Direction::from_rationals(&neg).expect("kernel vector is nonzero"));
            }
        }
        Cone::from_extreme_rays(n, &rays.iter().map(Direction::to_rationals).collect::<Vec<_>>(), &lin)
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Direction] {
        &self.generators
    }

    pub fn lineality(&self) -> &[Direction] {
        &self.lineality
    }

    fn spanning_rows(&self) -> Vec<RVec> {
        self.generators
            .iter()
            .chain(&self.lineality)
            .map(Direction::to_rationals)
            .collect()
    }

    pub fn dim(&self) -> usize {
        rank(&self.spanning_rows(), self.n)
    }

    /// Canonical basis of the orthogonal complement of the linear span.
    pub fn orthogonal_complement(&self) -> Vec<RVec> {
        kernel(&self.spanning_rows(), self.n)
    }

    /// Inner normals of the relative facets: `C = span C ∩ {a·x ≥ 0}`.
    pub fn facets(&self) -> &[Direction] {
        self.facets.get_or_init(|| self.compute_facets())
    }

    fn compute_facets(&self) -> Vec<Direction> {
        let n = self.n;
        let eqs = self.orthogonal_complement();
        let lin = rows_of(&self.lineality);
        let gens = rows_of(&self.generators);
        let p = n - eqs.len() - lin.len();
        if p == 0 {
            return Vec::new();
        }
        let mut base = eqs;
        base.extend(lin);
        let mut out: BTreeSet<Direction> = BTreeSet::new();
        for subset in (0..gens.len()).combinations(p - 1) {
            let mut rows = base.clone();
            rows.extend(subset.iter().map(|&i| gens[i].clone()));
            let k = kernel(&rows, n);
            if k.len() != 1 {
                continue;
            }
            let a = &k[0];
            let signs: Vec<Rational> = gens.iter().map(|g| dot(a, g)).collect();
            let d = Direction::from_rationals(a).expect("kernel vector is nonzero");
            if signs.iter().all(|s| !s.is_negative()) {
                out.insert(d);
            } else if signs.iter().all(|s| !s.is_positive()) {
                out.insert(d.neg());
            }
        }
        out.into_iter().collect()
    }

    pub fn in_span(&self, x: &[Rational]) -> bool {
        self.orthogonal_complement().iter().all(|e| dot(e, x).is_zero())
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.in_span(x) && self.facets().iter().all(|a| !a.dot(x).is_negative())
    }

    pub fn contains_relint(&self, x: &[Rational]) -> bool {
        self.in_span(x) && self.facets().iter().all(|a| a.dot(x).is_positive())
    }

    pub fn contains_dir(&self, d: &Direction) -> bool {
        self.contains(&d.to_rationals())
    }

    /// The face of the cone whose relative interior contains `x`.
    pub fn minimal_face(&self, x: &[Rational]) -> Option<Cone> {
        if !self.contains(x) {
            return None;
        }
        let tight: Vec<RVec> = self
            .facets()
            .iter()
            .filter(|a| a.dot(x).is_zero())
            .map(Direction::to_rationals)
            .collect();
        let gens: Vec<Direction> = self
            .generators
            .iter()
            .filter(|g| tight.iter().all(|a| g.dot(a).is_zero()))
            .cloned()
            .collect();
        Some(Cone::from_parts(self.n, gens, self.lineality.clone()))
    }

    fn constraints(&self) -> (Vec<RVec>, Vec<RVec>) {
        (self.orthogonal_complement(), rows_of(self.facets()))
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        let (mut eqs, mut ineqs) = self.constraints();
        let (e2, i2) = other.constraints();
        eqs.extend(e2);
        ineqs.extend(i2);
        Cone::from_constraints(self.n, &eqs, &ineqs)
    }

    /// `C ∩ v^⊥`.
    pub fn intersect_hyperplane(&self, v: &Direction) -> Cone {
        let (mut eqs, ineqs) = self.constraints();
        eqs.push(v.to_rationals());
        Cone::from_constraints(self.n, &eqs, &ineqs)
    }

    pub fn is_subset_of(&self, other: &Cone) -> bool {
        self.generators.iter().all(|g| other.contains_dir(g))
            && self
                .lineality
                .iter()
                .all(|l| other.contains_dir(l) && other.contains_dir(&l.neg()))
    }

    /// Image under an injective linear map given by its matrix rows.
    pub fn map_linear(&self, rows: &[RVec]) -> Cone {
        let apply = |d: &Direction| -> RVec {
            let x = d.to_rationals();
            rows.iter().map(|r| dot(r, &x)).collect()
        };
        let m = rows.len();
        let gens: Vec<RVec> = self.generators.iter().map(apply).collect();
        let lin: Vec<RVec> = self.lineality.iter().map(apply).collect();
        Cone::from_extreme_rays(m, &gens, &lin)
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.generators.iter().map(ToString::to_string).collect();
        let l: Vec<String> = self.lineality.iter().map(ToString::to_string).collect();
        write!(f, "cone[{}] + span[{}]", g.join(" "), l.join(" "))
    }
}

#[derive(Serialize, Deserialize)]
struct ConeJson {
    generators: Vec<Direction>,
    lineality: Vec<Direction>,
}

impl Serialize for Cone {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ConeJson { generators: self.generators.clone(), lineality: self.lineality.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cone {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ConeJson::deserialize(d)?;
        let n = j
            .generators
            .first()
            .or(j.lineality.first())
            .map(Direction::dim)
            .ok_or_else(|| serde::de::Error::custom("cone needs at least one vector"))?;
        Cone::new(n, &rows_of(&j.generators), &rows_of(&j.lineality)).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rvec;

    fn d(x: &[i64]) -> Direction {
        Direction::from_ints(x).unwrap()
    }

    #[test]
    fn redundant_generators_are_dropped() {
        let c = Cone::new(2, &[rvec(&[1, 0]), rvec(&[0, 1]), rvec(&[1, 1]), rvec(&[2, 0])], &[]).unwrap();
        assert_eq!(c.generators(), &[d(&[0, 1]), d(&[1, 0])]);
        assert_eq!(c.dim(), 2);
    }

    #[test]
    fn opposite_generators_become_lineality() {
        let c = Cone::new(3, &[rvec(&[1, 0, 0]), rvec(&[-1, 0, 0]), rvec(&[1, 1, 0])], &[]).unwrap();
        assert_eq!(c.lineality(), &[d(&[1, 0, 0])]);
        assert_eq!(c.generators(), &[d(&[0, 1, 0])]);
        let half_plane = Cone::new(3, &[rvec(&[0, 1, 0])], &[rvec(&[2, 0, 0])]).unwrap();
        assert_eq!(c, half_plane);
    }

    #[test]
    fn constraints_round_trip() {
        let c = Cone::new(3, &[rvec(&[1, 0, 0]), rvec(&[0, 1, 0]), rvec(&[0, 0, 1])], &[]).unwrap();
        assert_eq!(c.facets().len(), 3);
        let back = Cone::from_constraints(3, &[], &rows_of(c.facets()));
        assert_eq!(back, c);
    }

    #[test]
    fn membership_and_faces() {
        let c = Cone::new(2, &[rvec(&[1, 0]), rvec(&[0, 1])], &[]).unwrap();
        assert!(c.contains(&rvec(&[1, 1])));
        assert!(c.contains_relint(&rvec(&[1, 1])));
        assert!(!c.contains_relint(&rvec(&[1, 0])));
        assert!(!c.contains(&rvec(&[-1, 1])));
        assert_eq!(c.minimal_face(&rvec(&[3, 0])).unwrap(), Cone::ray(&d(&[1, 0])));
        assert_eq!(c.minimal_face(&rvec(&[0, 0])).unwrap().dim(), 0);
    }

    #[test]
    fn intersections() {
        let quadrant = Cone::new(2, &[rvec(&[1, 0]), rvec(&[0, 1])], &[]).unwrap();
        let other = Cone::new(2, &[rvec(&[1, 1]), rvec(&[1, -1])], &[]).unwrap();
        let both = quadrant.intersect(&other);
        assert_eq!(both.generators(), &[d(&[1, 0]), d(&[1, 1])]);
        let plane = Cone::subspace(3, &[rvec(&[1, 0, 0]), rvec(&[0, 1, 0])]);
        let line = plane.intersect_hyperplane(&d(&[0, 1, 0]));
        assert_eq!(line.lineality(), &[d(&[1, 0, 0])]);
        assert!(line.generators().is_empty());
        assert!(line.is_subset_of(&plane));
        assert!(!plane.is_subset_of(&line));
    }

    #[test]
    fn json_shape() {
        let c = Cone::new(3, &[rvec(&[0, 0, 1])], &[rvec(&[1, 0, 0])]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"generators":[[0,0,1]],"lineality":[[1,0,0]]}"#);
        let back: Cone = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
