//! Exact convex polytopes in vertex representation.
//!
//! A [`Polytope`] stores its irredundant vertices in lexicographic order.
//! Facets, the affine hull and the face lattice are computed on first use and
//! cached.

mod chart;
pub(crate) mod hull;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use chart::HyperplaneChart;

use crate::cone::{canonical_subspace, Cone};
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::linalg::{kernel, project_off_span, rank, rref};
use crate::rational::{add, dot, format_rational, parse_rational, sub, RVec, Rational};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 4;

/// A relative facet `⟨normal, x⟩ ≤ offset`; the normal lies in the linear
/// space parallel to the affine hull.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    pub normal: Direction,
    pub offset: Rational,
    pub vertices: Vec<usize>,
}

/// The closed halfspace `⟨normal, x⟩ ≤ offset`, or the hyperplane
/// `⟨normal, x⟩ = offset` where an equation is expected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: RVec,
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: RVec, offset: Rational) -> Self {
        Halfspace { normal, offset }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        dot(&self.normal, x) <= self.offset
    }

    /// Homogenized row `(−normal, offset)`, nonnegative on `(x, 1)` inside.
    fn homogenized(&self) -> RVec {
        let mut row: RVec = self.normal.iter().map(|x| -x).collect();
        row.push(self.offset.clone());
        row
    }
}

/// A face given by the indices of its vertices in the parent polytope.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub dim: usize,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Structure {
    dim: usize,
    perp: Vec<Direction>,
    facets: Vec<Facet>,
    /// Volume in the pivot-coordinate chart of the affine hull; the true
    /// volume when the polytope is full-dimensional.
    chart_volume: Rational,
}

#[derive(Clone, Debug)]
pub struct Polytope {
    n: usize,
    vertices: Vec<RVec>,
    structure: OnceLock<Structure>,
    lattice: OnceLock<Vec<Vec<Face>>>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Hull of sorted, distinct points. Returns the indices of the extreme points
/// and the structure indexed by position in that list.
fn analyze(points: &[RVec], n: usize) -> (Vec<usize>, Structure) {
    let v0 = &points[0];
    let diffs: Vec<RVec> = points[1..].iter().map(|p| sub(p, v0)).collect();
    let (dir_rows, pivots) = if diffs.is_empty() { (Vec::new(), Vec::new()) } else { rref(&diffs, n) };
    let d = pivots.len();
    let perp = canonical_subspace(&kernel(&dir_rows, n), n);
    let perp_rows: Vec<RVec> = perp.iter().map(Direction::to_rationals).collect();

    let lcm = points
        .iter()
        .flat_map(|p| pivots.iter().map(move |&j| p[j].denom().clone()))
        .fold(BigInt::one(), |acc, x| acc.lcm(&x));
    let scale = Rational::from_integer(lcm.clone());
    let chart: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| pivots.iter().map(|&j| (&p[j] * &scale).to_integer()).collect())
        .collect();
    let out = hull::full_dim_hull(&chart, d);

    let mut position = vec![usize::MAX; points.len()];
    for (k, &i) in out.vertices.iter().enumerate() {
        position[i] = k;
    }
    let facets = out
        .facets
        .iter()
        .map(|f| {
            let mut embedded = vec![Rational::zero(); n];
            for (a, &j) in f.normal.iter().zip(&pivots) {
                embedded[j] = Rational::from_integer(a.clone());
            }
            let w = project_off_span(&embedded, &perp_rows);
            let normal = Direction::from_rationals(&w).expect("facet normal is nonzero");
            let vertices: Vec<usize> = f.vertices.iter().map(|&i| position[i]).collect();
            let offset = normal.dot(&points[f.vertices[0]]);
            Facet { normal, offset, vertices }
        })
        .collect();
    let denom = factorial(d) * num_traits::pow(lcm, d);
    let chart_volume = Rational::new(out.volume_factorial, denom);
    (out.vertices, Structure { dim: d, perp, facets, chart_volume })
}

impl Polytope {
    /// Convex hull of `points` in `R^n`.
    pub fn hull(points: &[RVec], n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::UnsupportedDimension(n));
        }
        if points.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: p.len() });
        }
        let set: BTreeSet<RVec> = points.iter().cloned().collect();
        let pts: Vec<RVec> = set.into_iter().collect();
        let (keep, structure) = analyze(&pts, n);
        let vertices = keep.iter().map(|&i| pts[i].clone()).collect();
        let structure_lock = OnceLock::new();
        let _ = structure_lock.set(structure);
        Ok(Polytope { n, vertices, structure: structure_lock, lattice: OnceLock::new() })
    }

    /// The bounded set cut out by `ineqs` inside the affine space `eqs`.
    pub fn from_halfspaces(n: usize, ineqs: &[Halfspace], eqs: &[Halfspace]) -> Result<Self> {
        let mut rows: Vec<RVec> = ineqs.iter().map(Halfspace::homogenized).collect();
        let mut height = vec![Rational::zero(); n + 1];
        height[n] = Rational::one();
        rows.push(height);
        let eq_rows: Vec<RVec> = eqs.iter().map(Halfspace::homogenized).collect();
        let cone = Cone::from_constraints(n + 1, &eq_rows, &rows);
        if !cone.lineality().is_empty() || cone.generators().iter().any(|g| g.last().is_zero()) {
            return Err(Error::Invalid("halfspaces do not bound a polytope".into()));
        }
        if cone.generators().is_empty() {
            return Err(Error::Empty);
        }
        let points: Vec<RVec> = cone
            .generators()
            .iter()
            .map(|g| {
                let r = g.to_rationals();
                r[..n].iter().map(|x| x / &r[n]).collect()
            })
            .collect();
        Polytope::hull(&points, n)
    }

    pub fn from_ints(points: &[&[i64]], n: usize) -> Result<Self> {
        let pts: Vec<RVec> = points.iter().map(|p| crate::rational::rvec(p)).collect();
        Self::hull(&pts, n)
    }

    /// Wraps points already known to be the sorted vertex list of their hull.
    pub(crate) fn from_sorted_vertices(n: usize, vertices: Vec<RVec>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Polytope { n, vertices, structure: OnceLock::new(), lattice: OnceLock::new() }
    }

    pub fn point(p: RVec) -> Self {
        Polytope::from_sorted_vertices(p.len(), vec![p])
    }

    /// The segment `[0, v]`.
    pub fn segment(v: &Direction) -> Self {
        let zero = vec![Rational::zero(); v.dim()];
        Polytope::hull(&[zero, v.to_rationals()], v.dim()).expect("segment in supported dimension")
    }

    /// The cube `[lo, hi]^n`.
    pub fn cube(n: usize, lo: i64, hi: i64) -> Result<Self> {
        let pts: Vec<RVec> = (0..1usize << n)
            .map(|mask| (0..n).map(|j| crate::rational::rat(if mask >> j & 1 == 1 { hi } else { lo })).collect())
            .collect();
        Self::hull(&pts, n)
    }

    fn structure(&self) -> &Structure {
        self.structure.get_or_init(|| {
            let (keep, s) = analyze(&self.vertices, self.n);
            debug_assert_eq!(keep.len(), self.vertices.len());
            s
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[RVec] {
        &self.vertices
    }

    /// Affine dimension.
    pub fn dim(&self) -> usize {
        self.structure().dim
    }

    pub fn is_full_dim(&self) -> bool {
        self.dim() == self.n
    }

    pub fn facets(&self) -> &[Facet] {
        &self.structure().facets
    }

    /// Canonical basis of `(aff K)^⊥`.
    pub fn affine_complement(&self) -> &[Direction] {
        &self.structure().perp
    }

    pub fn volume(&self) -> Rational {
        if self.is_full_dim() {
            self.structure().chart_volume.clone()
        } else {
            Rational::zero()
        }
    }

    pub fn support_value(&self, w: &Direction) -> Rational {
        self.vertices
            .iter()
            .map(|v| w.dot(v))
            .max()
            .expect("polytope has a vertex")
    }

    /// Indices of the vertices maximizing `⟨w, ·⟩`.
    pub fn face_indices(&self, w: &Direction) -> Vec<usize> {
        let h = self.support_value(w);
        (0..self.vertices.len()).filter(|&i| w.dot(&self.vertices[i]) == h).collect()
    }

    /// `h_K(w)` and the exposed face `F(K, w)`.
    pub fn support(&self, w: &Direction) -> (Rational, Polytope) {
        let idx = self.face_indices(w);
        let h = w.dot(&self.vertices[idx[0]]);
        (h, self.sub_polytope(&idx))
    }

    pub fn sub_polytope(&self, indices: &[usize]) -> Polytope {
        Polytope::from_sorted_vertices(self.n, indices.iter().map(|&i| self.vertices[i].clone()).collect())
    }

    pub fn exposed_face(&self, w: &Direction) -> Face {
        let vertices = self.face_indices(w);
        Face { dim: self.affine_dim_of(&vertices), vertices }
    }

    fn affine_dim_of(&self, indices: &[usize]) -> usize {
        let base = &self.vertices[indices[0]];
        let diffs: Vec<RVec> = indices[1..].iter().map(|&i| sub(&self.vertices[i], base)).collect();
        rank(&diffs, self.n)
    }

    /// Faces grouped by dimension, from vertices up to the polytope itself.
    pub fn faces(&self) -> &[Vec<Face>] {
        self.lattice.get_or_init(|| self.compute_lattice())
    }

    fn compute_lattice(&self) -> Vec<Vec<Face>> {
        let d = self.dim();
        let mut by_dim: Vec<Vec<Face>> = vec![Vec::new(); d + 1];
        by_dim[d] = vec![Face { dim: d, vertices: (0..self.vertices.len()).collect() }];
        if d == 0 {
            return by_dim;
        }
        let facets = self.facets();
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.vertices.len()];
        for (fi, f) in facets.iter().enumerate() {
            for &v in &f.vertices {
                incident[v].push(fi);
            }
        }
        let mut level: BTreeSet<Vec<usize>> = facets.iter().map(|f| f.vertices.clone()).collect();
        for k in (0..d).rev() {
            by_dim[k] = level.iter().map(|v| Face { dim: k, vertices: v.clone() }).collect();
            if k == 0 {
                break;
            }
            let mut next: BTreeSet<Vec<usize>> = BTreeSet::new();
            for face in &level {
                let mut counts = vec![0usize; facets.len()];
                for &v in face {
                    for &fi in &incident[v] {
                        counts[fi] += 1;
                    }
                }
                for (fi, &c) in counts.iter().enumerate() {
                    if c == 0 || c == face.len() {
                        continue;
                    }
                    let meet: Vec<usize> = face.iter().copied().filter(|v| incident[*v].contains(&fi)).collect();
                    if self.affine_dim_of(&meet) == k - 1 {
                        next.insert(meet);
                    }
                }
            }
            level = next;
        }
        by_dim
    }

    fn check_face(&self, face: &Face) -> Result<()> {
        let faces = self.faces();
        if face.dim < faces.len() && faces[face.dim].iter().any(|f| f.vertices == face.vertices) {
            Ok(())
        } else {
            Err(Error::NotAFace)
        }
    }

    /// `N(K, F)`: facet normals of facets containing `F` plus `(aff K)^⊥`.
    pub fn normal_cone(&self, face: &Face) -> Result<Cone> {
        self.check_face(face)?;
        Ok(self.normal_cone_of(&face.vertices))
    }

    fn normal_cone_of(&self, vertices: &[usize]) -> Cone {
        let gens: Vec<Direction> = self
            .facets()
            .iter()
            .filter(|f| vertices.iter().all(|v| f.vertices.contains(v)))
            .map(|f| f.normal.clone())
            .collect();
        Cone::from_parts(self.n, gens, self.affine_complement().to_vec())
    }

    /// `N(K, F(K, u))`.
    pub fn normal_cone_at(&self, u: &Direction) -> Cone {
        self.normal_cone_of(&self.face_indices(u))
    }

    /// `T(K, u)`: the face of `N(K, F(K, u))` whose relative interior
    /// contains `u`. For polytopes this is the whole normal cone, which is
    /// asserted.
    pub fn touching_cone(&self, u: &Direction) -> Cone {
        let normal = self.normal_cone_at(u);
        let touching = normal
            .minimal_face(&u.to_rationals())
            .expect("u lies in the normal cone of its exposed face");
        assert_eq!(touching, normal, "touching cone differs from normal cone");
        touching
    }

    /// Directions `u` with `dim T(K, u) = 1`, sorted.
    pub fn fan_rays(&self) -> Vec<Direction> {
        let d = self.dim();
        let mut rays: Vec<Direction> = if d == self.n {
            self.facets().iter().map(|f| f.normal.clone()).collect()
        } else if d + 1 == self.n {
            let p = self.affine_complement()[0].clone();
            vec![p.neg(), p]
        } else {
            Vec::new()
        };
        rays.sort();
        rays
    }

    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let pts: Vec<RVec> = self
            .vertices
            .iter()
            .flat_map(|a| other.vertices.iter().map(move |b| add(a, b)))
            .collect();
        Polytope::hull(&pts, self.n)
    }

    pub fn sum_all(bodies: &[&Polytope]) -> Result<Polytope> {
        let (first, rest) = bodies.split_first().ok_or(Error::Empty)?;
        let mut acc = (*first).clone();
        for b in rest {
            acc = acc.minkowski_sum(b)?;
        }
        Ok(acc)
    }

    pub fn scale(&self, lambda: &Rational) -> Polytope {
        if lambda.is_zero() {
            return Polytope::point(vec![Rational::zero(); self.n]);
        }
        let pts: Vec<RVec> = self.vertices.iter().map(|v| v.iter().map(|x| x * lambda).collect()).collect();
        if lambda.is_positive() {
            Polytope::from_sorted_vertices(self.n, pts)
        } else {
            Polytope::hull(&pts, self.n).expect("same dimension")
        }
    }

    pub fn translate(&self, t: &[Rational]) -> Polytope {
        Polytope::from_sorted_vertices(self.n, self.vertices.iter().map(|v| add(v, t)).collect())
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        let rel = sub(x, &self.vertices[0]);
        self.affine_complement().iter().all(|p| p.dot(&rel).is_zero())
            && self.facets().iter().all(|f| f.normal.dot(x) <= f.offset)
    }

    pub fn contains_polytope(&self, other: &Polytope) -> bool {
        other.vertices.iter().all(|v| self.contains(v))
    }

    pub fn has_interior_origin(&self) -> bool {
        self.is_full_dim() && self.facets().iter().all(|f| f.offset.is_positive())
    }

    /// The polar body; requires the origin in the interior.
    pub fn polar(&self) -> Result<Polytope> {
        if !self.has_interior_origin() {
            return Err(Error::OriginNotInterior);
        }
        let pts: Vec<RVec> = self
            .facets()
            .iter()
            .map(|f| f.normal.to_rationals().iter().map(|x| x / &f.offset).collect())
            .collect();
        Polytope::hull(&pts, self.n)
    }

    /// Orthogonal projection onto `v^⊥` in the coordinates of the canonical
    /// chart of `v^⊥`.
    pub fn project(&self, v: &Direction) -> Result<Polytope> {
        HyperplaneChart::new(v)?.project(self)
    }

    pub fn vertex_centroid(&self) -> RVec {
        let k = Rational::from_integer(BigInt::from(self.vertices.len()));
        let mut c = vec![Rational::zero(); self.n];
        for v in &self.vertices {
            for (ci, x) in c.iter_mut().zip(v) {
                *ci += x;
            }
        }
        c.iter().map(|x| x / &k).collect()
    }

    /// Dimension of the linear span of `F(K, u) − F(K, u)`.
    pub fn face_dim(&self, u: &Direction) -> usize {
        self.affine_dim_of(&self.face_indices(u))
    }

    /// Basis of the linear space parallel to `aff K`.
    pub fn direction_space(&self) -> Vec<RVec> {
        let base = &self.vertices[0];
        let diffs: Vec<RVec> = self.vertices[1..].iter().map(|v| sub(v, base)).collect();
        if diffs.is_empty() {
            return Vec::new();
        }
        rref(&diffs, self.n).0
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.vertices.iter().map(|v| v.iter().map(crate::rational::to_f64).collect()).collect()
    }

    /// Linear dual pairing `⟨w, x⟩` maximized, for a rational vector `w`.
    pub fn support_value_rational(&self, w: &[Rational]) -> Rational {
        self.vertices.iter().map(|v| dot(w, v)).max().expect("polytope has a vertex")
    }
}

impl fmt::Display for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self
            .vertices
            .iter()
            .map(|v| format!("({})", v.iter().map(format_rational).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "conv{{{}}}", vs.join(" "))
    }
}

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    dim: usize,
    vertices: Vec<Vec<String>>,
}

impl Serialize for Polytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeJson {
            dim: self.n,
            vertices: self.vertices.iter().map(|v| v.iter().map(format_rational).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polytope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolytopeJson::deserialize(d)?;
        let pts = j
            .vertices
            .iter()
            .map(|v| v.iter().map(|s| parse_rational(s)).collect::<Result<RVec>>())
            .collect::<Result<Vec<RVec>>>()
            .map_err(serde::de::Error::custom)?;
        Polytope::hull(&pts, j.dim).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests;
