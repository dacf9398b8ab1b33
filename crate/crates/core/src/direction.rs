//! Exact rays on the sphere.
//!
//! A [`Direction`] is the primitive integer vector on a ray, so two rays are
//! equal exactly when their coordinate vectors are equal. Antipodal rays are
//! distinct.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{primitive_integer, RVec, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction(Vec<BigInt>);

impl Direction {
    /// Normalizes `coords` to the primitive vector on its ray.
    pub fn new(coords: Vec<BigInt>) -> Result<Self> {
        let g = coords.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return Err(Error::ZeroDirection);
        }
        Ok(Direction(coords.into_iter().map(|x| x / &g).collect()))
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn from_rationals(v: &[Rational]) -> Result<Self> {
        primitive_integer(v).map(Direction).ok_or(Error::ZeroDirection)
    }

    /// Standard basis vector `e_i` (0-based) in `R^n`.
    pub fn axis(n: usize, i: usize) -> Self {
        let mut v = vec![BigInt::zero(); n];
        v[i] = BigInt::from(1);
        Direction(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn to_rationals(&self) -> RVec {
        self.0
            .iter()
            .map(|x| Rational::from_integer(x.clone()))
            .collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn dot(&self, x: &[Rational]) -> Rational {
        debug_assert_eq!(self.0.len(), x.len());
        self.0
            .iter()
            .zip(x)
            .fold(Rational::zero(), |acc, (a, b)| acc + b * a)
    }

    pub fn dot_dir(&self, other: &Direction) -> BigInt {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> BigInt {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn norm_f64(&self) -> f64 {
        self.norm_sq().to_f64().unwrap_or(f64::NAN).sqrt()
    }

    pub fn neg(&self) -> Direction {
        Direction(self.0.iter().map(|x| -x).collect())
    }

    pub fn last(&self) -> &BigInt {
        self.0.last().expect("direction is nonempty")
    }

    pub fn is_negative_last(&self) -> bool {
        self.last().is_negative()
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Direction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let vals: Vec<serde_json::Value> = self
            .0
            .iter()
            .map(|x| match x.to_i64() {
                Some(i) => serde_json::Value::from(i),
                None => serde_json::Value::from(x.to_string()),
            })
            .collect();
        vals.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Direction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let vals = Vec::<serde_json::Value>::deserialize(d)?;
        let mut coords = Vec::with_capacity(vals.len());
        for v in vals {
            let x = match &v {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| serde::de::Error::custom("direction entries must be integers")),
                serde_json::Value::String(s) => s
                    .parse::<BigInt>()
                    .map_err(|_| serde::de::Error::custom("invalid integer string")),
                _ => Err(serde::de::Error::custom("direction entries must be integers")),
            }?;
            coords.push(x);
        }
        Direction::new(coords).map_err(serde::de::Error::custom)
    }
}
