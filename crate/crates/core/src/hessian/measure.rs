use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, RVec, Rational};

/// A finite atomic measure on `R^n` with exact rational masses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneMeasure {
    n: usize,
    atoms: BTreeMap<RVec, Rational>,
}

impl PlaneMeasure {
    pub fn new(n: usize) -> Self {
        PlaneMeasure { n, atoms: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Adds `mass` at `x`; atoms that end up at zero are removed.
    pub fn insert(&mut self, x: RVec, mass: Rational) {
        debug_assert_eq!(x.len(), self.n);
        if mass.is_zero() {
            return;
        }
        let entry = self.atoms.entry(x.clone()).or_insert_with(Rational::zero);
        *entry += mass;
        if entry.is_zero() {
            self.atoms.remove(&x);
        }
    }

    pub fn atoms(&self) -> &BTreeMap<RVec, Rational> {
        &self.atoms
    }

    pub fn mass_at(&self, x: &[Rational]) -> Rational {
        self.atoms.get(x).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.atoms.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct AtomJson {
    point: Vec<String>,
    mass: String,
    mass_numeric: f64,
}

#[derive(Serialize, Deserialize)]
struct MeasureJson {
    dim: usize,
    atoms: Vec<AtomJson>,
}

impl Serialize for PlaneMeasure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MeasureJson {
            dim: self.n,
            atoms: self
                .atoms
                .iter()
                .map(|(x, m)| AtomJson {
                    point: x.iter().map(format_rational).collect(),
                    mass: format_rational(m),
                    mass_numeric: m.to_f64().unwrap_or(f64::NAN),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PlaneMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MeasureJson::deserialize(d)?;
        let mut m = PlaneMeasure::new(j.dim);
        for a in j.atoms {
            let x = a.point.iter().map(|s| parse_rational(s)).collect::<Result<RVec>>().map_err(serde::de::Error::custom)?;
            if x.len() != j.dim {
                return Err(serde::de::Error::custom(Error::DimensionMismatch { expected: j.dim, found: x.len() }));
            }
            m.insert(x, parse_rational(&a.mass).map_err(serde::de::Error::custom)?);
        }
        Ok(m)
    }
}
