use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::rational::{format_rational, parse_rational, Rational};

/// A finite atomic measure on `S^{n−1}`. The atom at a primitive direction
/// `w` with scale `q` has mass `q·‖w‖₂`, so `∫ h_K dS = Σ q·h_K(w)` is exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereMeasure {
    n: usize,
    atoms: BTreeMap<Direction, Rational>,
}

impl SphereMeasure {
    pub fn new(n: usize) -> Self {
        SphereMeasure { n, atoms: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Adds `scale` to the atom at `dir`; atoms that end up at zero are removed.
    pub fn insert(&mut self, dir: Direction, scale: Rational) {
        debug_assert_eq!(dir.dim(), self.n);
        if scale.is_zero() {
            return;
        }
        let entry = self.atoms.entry(dir.clone()).or_insert_with(Rational::zero);
        *entry += scale;
        if entry.is_zero() {
            self.atoms.remove(&dir);
        }
    }

    pub fn atoms(&self) -> &BTreeMap<Direction, Rational> {
        &self.atoms
    }

    pub fn scale_at(&self, dir: &Direction) -> Rational {
        self.atoms.get(dir).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn mass_f64(&self, dir: &Direction) -> f64 {
        self.scale_at(dir).to_f64().unwrap_or(f64::NAN) * dir.norm_f64()
    }

    pub fn support(&self) -> Vec<Direction> {
        self.atoms.keys().cloned().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_positive(&self) -> bool {
        self.atoms.values().all(Signed::is_positive)
    }

    /// `∫ h_K dS`.
    pub fn integrate(&self, k: &Polytope) -> Rational {
        self.atoms.iter().map(|(w, q)| k.support_value(w) * q).sum()
    }

    pub fn scaled(&self, lambda: &Rational) -> SphereMeasure {
        let mut out = SphereMeasure::new(self.n);
        for (w, q) in &self.atoms {
            out.insert(w.clone(), q * lambda);
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct AtomJson {
    dir: Direction,
    scale: String,
    mass_numeric: f64,
}

#[derive(Serialize, Deserialize)]
struct MeasureJson {
    dim: usize,
    atoms: Vec<AtomJson>,
}

impl Serialize for SphereMeasure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MeasureJson {
            dim: self.n,
            atoms: self
                .atoms
                .iter()
                .map(|(w, q)| AtomJson { dir: w.clone(), scale: format_rational(q), mass_numeric: self.mass_f64(w) })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SphereMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MeasureJson::deserialize(d)?;
        let mut m = SphereMeasure::new(j.dim);
        for a in j.atoms {
            if a.dir.dim() != j.dim {
                return Err(serde::de::Error::custom(Error::DimensionMismatch { expected: j.dim, found: a.dir.dim() }));
            }
            let q = parse_rational(&a.scale).map_err(serde::de::Error::custom)?;
            m.insert(a.dir, q);
        }
        Ok(m)
    }
}

impl SphereMeasure {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}
