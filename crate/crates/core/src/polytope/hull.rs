//! Beneath-beyond convex hull of integer points that affinely span `Z^d`.
//!
//! Facets are kept as simplices while points are inserted. A simplicial facet
//! counts as visible only when the new point lies strictly beyond it, so
//! coplanar points never break the triangulation; simplices sharing a
//! hyperplane are merged at the end.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, ToPrimitive, Zero};

use crate::linalg::rank;
use crate::rational::{RVec, Rational};

pub(crate) struct HullFacet {
    pub normal: Vec<BigInt>,
    pub vertices: Vec<usize>,
}

pub(crate) struct HullOutput {
    /// Indices of the extreme points, increasing.
    pub vertices: Vec<usize>,
    /// Outer facet normals with the extreme points on each facet.
    pub facets: Vec<HullFacet>,
    /// `d!` times the volume.
    pub volume_factorial: BigInt,
}

/// Integer types the hull runs over; arithmetic reports overflow as `None`.
pub(crate) trait HullInt:
    Clone + Ord + Zero + Signed + Integer + CheckedAdd + CheckedSub + CheckedMul + std::hash::Hash
{
    fn to_big(&self) -> BigInt;
    fn from_usize(k: usize) -> Self;
}

impl HullInt for i128 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_usize(k: usize) -> Self {
        k as i128
    }
}

impl HullInt for BigInt {
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn from_usize(k: usize) -> Self {
        BigInt::from(k)
    }
}

fn det<T: HullInt>(m: &[Vec<T>]) -> Option<T> {
    match m.len() {
        0 => Some(T::one()),
        1 => Some(m[0][0].clone()),
        2 => m[0][0].checked_mul(&m[1][1])?.checked_sub(&m[0][1].checked_mul(&m[1][0])?),
        k => {
            let mut total = T::zero();
            for c in 0..k {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<T>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != c)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][c].checked_mul(&det(&minor)?)?;
                total = if c % 2 == 0 { total.checked_add(&term)? } else { total.checked_sub(&term)? };
            }
            Some(total)
        }
    }
}

fn dot<T: HullInt>(a: &[T], b: &[T]) -> Option<T> {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc.checked_add(&x.checked_mul(y)?)?;
    }
    Some(acc)
}

fn diff<T: HullInt>(a: &[T], b: &[T]) -> Option<Vec<T>> {
    a.iter().zip(b).map(|(x, y)| x.checked_sub(y)).collect()
}

/// Primitive normal of the hyperplane through `d` points in `Z^d`.
fn hyperplane_normal<T: HullInt>(pts: &[&Vec<T>]) -> Option<Vec<T>> {
    let d = pts[0].len();
    let rows: Vec<Vec<T>> = pts[1..].iter().map(|p| diff(p, pts[0])).collect::<Option<_>>()?;
    let mut normal: Vec<T> = Vec::with_capacity(d);
    for j in 0..d {
        let minor: Vec<Vec<T>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let m = det(&minor)?;
        normal.push(if j % 2 == 0 { m } else { -m });
    }
    let g = normal.iter().fold(T::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() {
        for x in normal.iter_mut() {
            *x = x.div_floor(&g);
        }
    }
    Some(normal)
}

struct Simplex<T> {
    verts: Vec<usize>,
    normal: Vec<T>,
    offset: T,
}

fn to_rvec<T: HullInt>(p: &[T]) -> RVec {
    p.iter().map(|x| Rational::from_integer(x.to_big())).collect()
}

/// Coordinates small enough that the hull arithmetic cannot overflow `i128`
/// in the common case; overflow is still detected and triggers the `BigInt`
/// path.
const SMALL: i64 = 1 << 40;

pub(crate) fn full_dim_hull(points: &[Vec<BigInt>], d: usize) -> HullOutput {
    match d {
        0 => HullOutput { vertices: vec![0], facets: Vec::new(), volume_factorial: BigInt::from(1) },
        1 => {
            let (lo, hi) = points.iter().enumerate().fold((0, 0), |(lo, hi), (i, p)| {
                (
                    if p[0] < points[lo][0] { i } else { lo },
                    if p[0] > points[hi][0] { i } else { hi },
                )
            });
            let mut vertices = vec![lo, hi];
            vertices.sort_unstable();
            HullOutput {
                vertices,
                facets: vec![
                    HullFacet { normal: vec![BigInt::from(-1)], vertices: vec![lo] },
                    HullFacet { normal: vec![BigInt::from(1)], vertices: vec![hi] },
                ],
                volume_factorial: &points[hi][0] - &points[lo][0],
            }
        }
        _ => {
            let small: Option<Vec<Vec<i128>>> = points
                .iter()
                .map(|p| {
                    p.iter()
                        .map(|x| x.to_i64().filter(|v| v.abs() < SMALL).map(i128::from))
                        .collect()
                })
                .collect();
            small
                .and_then(|pts| beneath_beyond(&pts, d))
                .or_else(|| beneath_beyond(points, d))
                .expect("BigInt arithmetic does not overflow")
        }
    }
}

fn beneath_beyond<T: HullInt>(points: &[Vec<T>], d: usize) -> Option<HullOutput> {
    // Initial simplex, chosen greedily in input order.
    let mut simplex = vec![0usize];
    let mut diffs: Vec<RVec> = Vec::new();
    for (i, p) in points.iter().enumerate().skip(1) {
        if simplex.len() == d + 1 {
            break;
        }
        diffs.push(to_rvec(&diff(p, &points[0])?));
        if rank(&diffs, d) == diffs.len() {
            simplex.push(i);
        } else {
            diffs.pop();
        }
    }
    assert_eq!(simplex.len(), d + 1, "points must affinely span the chart");
    let mut centroid = vec![T::zero(); d];
    for &i in &simplex {
        for (c, x) in centroid.iter_mut().zip(&points[i]) {
            *c = c.checked_add(x)?;
        }
    }
    let weight = T::from_usize(d + 1);

    let mut facets: Vec<Option<Simplex<T>>> = Vec::new();
    let mut ridges: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();

    let make = |verts: Vec<usize>| -> Option<Simplex<T>> {
        let pts: Vec<&Vec<T>> = verts.iter().map(|&i| &points[i]).collect();
        let mut normal = hyperplane_normal(&pts)?;
        let mut offset = dot(&normal, &points[verts[0]])?;
        if dot(&normal, &centroid)? > weight.checked_mul(&offset)? {
            normal = normal.into_iter().map(|x| -x).collect();
            offset = -offset;
        }
        Some(Simplex { verts, normal, offset })
    };
    let ridges_of = |verts: &[usize]| -> Vec<Vec<usize>> {
        (0..verts.len())
            .map(|skip| verts.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &v)| v).collect())
            .collect()
    };
    let add = |s: Simplex<T>, facets: &mut Vec<Option<Simplex<T>>>, ridges: &mut HashMap<Vec<usize>, Vec<usize>>| {
        let id = facets.len();
        for r in ridges_of(&s.verts) {
            ridges.entry(r).or_default().push(id);
        }
        facets.push(Some(s));
    };

    for skip in 0..=d {
        let verts: Vec<usize> = simplex.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &v)| v).collect();
        add(make(verts)?, &mut facets, &mut ridges);
    }

    let mut alive: Vec<usize> = (0..facets.len()).collect();
    for (pi, p) in points.iter().enumerate() {
        if simplex.contains(&pi) {
            continue;
        }
        let mut visible: Vec<usize> = Vec::new();
        for &f in &alive {
            let s = facets[f].as_ref().expect("alive facet");
            if dot(&s.normal, p)? > s.offset {
                visible.push(f);
            }
        }
        if visible.is_empty() {
            continue;
        }
        let mut horizon: Vec<Vec<usize>> = Vec::new();
        for &f in &visible {
            for r in ridges_of(&facets[f].as_ref().expect("alive facet").verts) {
                let other = ridges[&r].iter().copied().find(|&g| g != f);
                if let Some(g) = other {
                    if !visible.contains(&g) {
                        horizon.push(r);
                    }
                }
            }
        }
        for &f in &visible {
            let s = facets[f].take().expect("alive facet");
            for r in ridges_of(&s.verts) {
                if let Some(owners) = ridges.get_mut(&r) {
                    owners.retain(|&g| g != f);
                    if owners.is_empty() {
                        ridges.remove(&r);
                    }
                }
            }
        }
        let first_new = facets.len();
        for r in horizon {
            let mut verts = r;
            verts.push(pi);
            verts.sort_unstable();
            add(make(verts)?, &mut facets, &mut ridges);
        }
        alive.retain(|&f| facets[f].is_some());
        alive.extend(first_new..facets.len());
    }

    let simplices: Vec<&Simplex<T>> = alive.iter().map(|&f| facets[f].as_ref().expect("alive facet")).collect();
    let mut merged: BTreeMap<(Vec<T>, T), ()> = BTreeMap::new();
    let mut candidates: Vec<usize> = Vec::new();
    for s in &simplices {
        merged.insert((s.normal.clone(), s.offset.clone()), ());
        candidates.extend(&s.verts);
    }
    candidates.sort_unstable();
    candidates.dedup();
    let planes: Vec<(Vec<T>, T)> = merged.into_keys().collect();

    let mut vertices = Vec::new();
    let mut on_plane: Vec<Vec<usize>> = vec![Vec::new(); planes.len()];
    for &c in &candidates {
        let mut tight = Vec::new();
        for (h, (normal, offset)) in planes.iter().enumerate() {
            if dot(normal, &points[c])? == *offset {
                tight.push(h);
            }
        }
        let normals: Vec<RVec> = tight.iter().map(|&h| to_rvec(&planes[h].0)).collect();
        if rank(&normals, d) == d {
            vertices.push(c);
            for h in tight {
                on_plane[h].push(c);
            }
        }
    }

    let apex = vertices[0];
    let mut volume_factorial = BigInt::zero();
    for s in &simplices {
        if s.verts.contains(&apex) {
            continue;
        }
        let m: Vec<Vec<BigInt>> = s
            .verts
            .iter()
            .map(|&v| points[v].iter().zip(&points[apex]).map(|(a, b)| a.to_big() - b.to_big()).collect())
            .collect();
        volume_factorial += det(&m).expect("BigInt determinant").abs();
    }

    let facets = planes
        .into_iter()
        .zip(on_plane)
        .map(|((normal, _), vertices)| HullFacet { normal: normal.iter().map(HullInt::to_big).collect(), vertices })
        .collect();
    Some(HullOutput { vertices, facets, volume_factorial })
}
