use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::rational::{dot, format_rational, parse_rational, RVec, Rational};

/// The affine function `⟨a, x⟩ − b`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Piece {
    pub a: RVec,
    pub b: Rational,
}

impl Piece {
    pub fn new(a: RVec, b: Rational) -> Self {
        Piece { a, b }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot(&self.a, x) - &self.b
    }
}

/// `f = maxᵢ(⟨aᵢ, ·⟩ − bᵢ)` together with a closed domain box.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseAffineConvex {
    pieces: Vec<Piece>,
    domain: Vec<(Rational, Rational)>,
}

impl PiecewiseAffineConvex {
    pub fn new(pieces: Vec<Piece>, domain: Vec<(Rational, Rational)>) -> Result<Self> {
        let n = domain.len();
        if pieces.is_empty() || n == 0 {
            return Err(Error::Empty);
        }
        if let Some(p) = pieces.iter().find(|p| p.a.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: p.a.len() });
        }
        if domain.iter().any(|(lo, hi)| lo >= hi) {
            return Err(Error::Invalid("domain box has an empty side".into()));
        }
        Ok(PiecewiseAffineConvex { pieces, domain })
    }

    /// Integer pieces `(a, b)` on the cube `[lo, hi]^n`.
    pub fn from_ints(pieces: &[(&[i64], i64)], lo: i64, hi: i64) -> Result<Self> {
        let n = pieces.first().map_or(0, |(a, _)| a.len());
        let pieces = pieces
            .iter()
            .map(|(a, b)| Piece::new(a.iter().map(|&x| Rational::from_integer(x.into())).collect(), Rational::from_integer((*b).into())))
            .collect();
        let side = (Rational::from_integer(lo.into()), Rational::from_integer(hi.into()));
        PiecewiseAffineConvex::new(pieces, vec![side; n])
    }

    pub fn dim(&self) -> usize {
        self.domain.len()
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn domain(&self) -> &[(Rational, Rational)] {
        &self.domain
    }

    pub fn in_domain(&self, x: &[Rational]) -> bool {
        x.iter().zip(&self.domain).all(|(c, (lo, hi))| lo <= c && c <= hi)
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.pieces.iter().map(|p| p.eval(x)).max().expect("at least one piece")
    }

    /// Indices of the pieces attaining the maximum at `x`.
    pub fn active(&self, x: &[Rational]) -> Vec<usize> {
        let values: Vec<Rational> = self.pieces.iter().map(|p| p.eval(x)).collect();
        let top = values.iter().max().expect("at least one piece");
        (0..values.len()).filter(|&i| values[i] == *top).collect()
    }

    /// `aᵢ − a₀` over the active pieces; their span is `L̄(f, x)^⊥`.
    pub fn active_differences(&self, x: &[Rational]) -> Vec<RVec> {
        let active = self.active(x);
        let base = &self.pieces[active[0]].a;
        active[1..]
            .iter()
            .map(|&i| self.pieces[i].a.iter().zip(base).map(|(p, q)| p - q).collect())
            .collect()
    }

    /// `∂f(x)`, the hull of the active slopes.
    pub fn subdifferential(&self, x: &[Rational]) -> Polytope {
        let slopes: Vec<RVec> = self.active(x).into_iter().map(|i| self.pieces[i].a.clone()).collect();
        Polytope::hull(&slopes, self.dim()).expect("slopes share the dimension")
    }

    /// `f + g` on the intersection of the domain boxes.
    pub fn sum(&self, other: &PiecewiseAffineConvex) -> Result<PiecewiseAffineConvex> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let pieces: BTreeSet<Piece> = self
            .pieces
            .iter()
            .cartesian_product(&other.pieces)
            .map(|(p, q)| Piece::new(p.a.iter().zip(&q.a).map(|(x, y)| x + y).collect(), &p.b + &q.b))
            .collect();
        let domain = self
            .domain
            .iter()
            .zip(&other.domain)
            .map(|((a, b), (c, d))| (a.max(c).clone(), b.min(d).clone()))
            .collect();
        PiecewiseAffineConvex::new(pieces.into_iter().collect(), domain)
    }

    pub fn sum_all(fs: &[&PiecewiseAffineConvex]) -> Result<PiecewiseAffineConvex> {
        let (first, rest) = fs.split_first().ok_or(Error::Empty)?;
        rest.iter().try_fold((*first).clone(), |acc, f| acc.sum(f))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct PieceJson {
    a: Vec<String>,
    b: String,
}

#[derive(Serialize, Deserialize)]
struct FunctionJson {
    dim: usize,
    pieces: Vec<PieceJson>,
    #[serde(rename = "box")]
    domain: Vec<(String, String)>,
}

impl Serialize for PiecewiseAffineConvex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FunctionJson {
            dim: self.dim(),
            pieces: self
                .pieces
                .iter()
                .map(|p| PieceJson { a: p.a.iter().map(format_rational).collect(), b: format_rational(&p.b) })
                .collect(),
            domain: self.domain.iter().map(|(lo, hi)| (format_rational(lo), format_rational(hi))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiecewiseAffineConvex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = FunctionJson::deserialize(d)?;
        let parse = |s: &str| parse_rational(s).map_err(serde::de::Error::custom);
        let pieces = j
            .pieces
            .iter()
            .map(|p| {
                let a = p.a.iter().map(|s| parse(s)).collect::<std::result::Result<RVec, _>>()?;
                Ok(Piece::new(a, parse(&p.b)?))
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        let domain = j
            .domain
            .iter()
            .map(|(lo, hi)| Ok((parse(lo)?, parse(hi)?)))
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        if domain.len() != j.dim {
            return Err(serde::de::Error::custom(Error::DimensionMismatch { expected: j.dim, found: domain.len() }));
        }
        PiecewiseAffineConvex::new(pieces, domain).map_err(serde::de::Error::custom)
    }
}
