//! Integer coordinates on a hyperplane `v^⊥`.
//!
//! The basis of `v^⊥` is `v_k e_j − v_j e_k` (made primitive) for `j ≠ k`,
//! where `k` is the first nonzero coordinate of `v`. Points are expressed in
//! this basis; linear functionals on `v^⊥` are expressed by their values on
//! the basis vectors. Volumes measured in chart coordinates differ from true
//! volumes by `sqrt(det G) = |det[B | v]| / ‖v‖`, `G` the Gram matrix.

use num_traits::{Signed, Zero};

use super::Polytope;
use crate::cone::Cone;
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::linalg::{det, inverse};
use crate::rational::{dot, RVec, Rational};

#[derive(Clone, Debug)]
pub struct HyperplaneChart {
    normal: Direction,
    basis: Vec<RVec>,
    gram_inv: Vec<RVec>,
    det_bv: Rational,
}

impl HyperplaneChart {
    pub fn new(v: &Direction) -> Result<Self> {
        let n = v.dim();
        let vr = v.to_rationals();
        let k = vr.iter().position(|x| !x.is_zero()).ok_or(Error::ZeroDirection)?;
        let basis: Vec<RVec> = (0..n)
            .filter(|&j| j != k)
            .map(|j| {
                let mut b = vec![Rational::zero(); n];
                b[j] = vr[k].clone();
                b[k] = -vr[j].clone();
                Direction::from_rationals(&b).expect("basis vector is nonzero").to_rationals()
            })
            .collect();
        let gram: Vec<RVec> = basis.iter().map(|a| basis.iter().map(|b| dot(a, b)).collect()).collect();
        let gram_inv = inverse(&gram).expect("chart basis is independent");
        let mut m = basis.clone();
        m.push(vr);
        let det_bv = det(&m).abs();
        Ok(HyperplaneChart { normal: v.clone(), basis, gram_inv, det_bv })
    }

    pub fn normal(&self) -> &Direction {
        &self.normal
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RVec] {
        &self.basis
    }

    /// `|det[B | v]|`; equals `sqrt(det G)·‖v‖`.
    pub fn det_bv(&self) -> &Rational {
        &self.det_bv
    }

    /// Chart coordinates of the orthogonal projection of `x` onto `v^⊥`.
    pub fn coords(&self, x: &[Rational]) -> RVec {
        let bx: RVec = self.basis.iter().map(|b| dot(b, x)).collect();
        self.gram_inv.iter().map(|row| dot(row, &bx)).collect()
    }

    /// The point of `v^⊥` with chart coordinates `c`.
    pub fn embed(&self, c: &[Rational]) -> RVec {
        let n = self.normal.dim();
        let mut x = vec![Rational::zero(); n];
        for (ci, b) in c.iter().zip(&self.basis) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += ci * bi;
            }
        }
        x
    }

    /// Chart representation `Bᵀu` of the functional `⟨u, ·⟩` restricted to
    /// `v^⊥`.
    pub fn dir_to_chart(&self, u: &Direction) -> Result<Direction> {
        let ur = u.to_rationals();
        let d: RVec = self.basis.iter().map(|b| dot(b, &ur)).collect();
        Direction::from_rationals(&d)
    }

    /// The vector `B G⁻¹ d` of `v^⊥` representing the chart functional `d`.
    pub fn embed_functional(&self, d: &Direction) -> RVec {
        self.functional_to_ambient(&d.to_rationals())
    }

    fn functional_to_ambient(&self, d: &[Rational]) -> RVec {
        let c: RVec = self.gram_inv.iter().map(|row| dot(row, d)).collect();
        self.embed(&c)
    }

    /// The direction in `v^⊥` representing the chart functional `d`.
    pub fn dir_from_chart(&self, d: &Direction) -> Direction {
        Direction::from_rationals(&self.functional_to_ambient(&d.to_rationals()))
            .expect("chart map is injective")
    }

    /// Maps a cone of chart functionals into `v^⊥ ⊂ R^n`.
    pub fn cone_from_chart(&self, c: &Cone) -> Cone {
        let n = self.normal.dim();
        let m = self.dim();
        let rows: Vec<RVec> = (0..n)
            .map(|r| {
                (0..m)
                    .map(|col| {
                        let e: RVec = (0..m).map(|i| if i == col { Rational::from_integer(1.into()) } else { Rational::zero() }).collect();
                        self.functional_to_ambient(&e)[r].clone()
                    })
                    .collect()
            })
            .collect();
        c.map_linear(&rows)
    }

    pub fn project(&self, k: &Polytope) -> Result<Polytope> {
        let pts: Vec<RVec> = k.vertices().iter().map(|x| self.coords(x)).collect();
        Polytope::hull(&pts, self.dim())
    }
}
