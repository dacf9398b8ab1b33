//! Mixed volumes and atomic mixed area measures of polytopes.
//!
//! Mixed volumes are computed two independent ways: by interpolating the
//! volume polynomial `λ ↦ Vol(λ₁C₁ + ⋯ + λₙCₙ)`, and by integrating the last
//! support function against the mixed area measure of the others, whose
//! atoms are themselves mixed volumes of faces one dimension down.

mod checks;
mod measure;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;

pub use checks::{
    af_check, integrate_support, monotonicity_equality, positivity, projection_identities, AfReport,
    MonotonicityReport, PositivityReport, ProjectionReport, SupportArg,
};
pub use measure::SphereMeasure;

use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::linalg::solve;
use crate::polytope::{HyperplaneChart, Polytope, MAX_DIM};
use crate::rational::{rat, Rational};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixedVolumeReport {
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub value: Rational,
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub method_a: Rational,
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub method_b: Rational,
    /// Directions of independent segments `Iᵢ ⊆ Cᵢ` when the value is positive.
    pub witness: Option<Vec<Direction>>,
}

impl MixedVolumeReport {
    pub fn agree(&self) -> bool {
        self.method_a == self.method_b
    }
}

pub(crate) fn check_tuple(bodies: &[Polytope], expected_len: impl Fn(usize) -> usize) -> Result<usize> {
    let n = bodies.first().ok_or(Error::Empty)?.ambient_dim();
    if n == 0 || n > MAX_DIM {
        return Err(Error::UnsupportedDimension(n));
    }
    if let Some(b) = bodies.iter().find(|b| b.ambient_dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: b.ambient_dim() });
    }
    if bodies.len() != expected_len(n) {
        return Err(Error::Invalid(format!(
            "expected {} bodies in dimension {n}, found {}",
            expected_len(n),
            bodies.len()
        )));
    }
    Ok(n)
}

/// `𝖵ₙ(C₁, …, Cₙ)` by both methods, with a segment witness when positive.
pub fn mixed_volume(bodies: &[Polytope]) -> Result<MixedVolumeReport> {
    check_tuple(bodies, |n| n)?;
    let refs: Vec<&Polytope> = bodies.iter().collect();
    let method_a = mixed_volume_interpolated(&refs);
    let method_b = mixed_volume_measure(&refs);
    let witness = if method_a.is_positive() {
        checks::segment_witness(&refs).map(|segs| segs.into_iter().map(|(_, d)| d).collect())
    } else {
        None
    };
    Ok(MixedVolumeReport { value: method_a.clone(), method_a, method_b, witness })
}

/// Exponent vectors `e ∈ N^k` with `|e| ≤ deg`, in a fixed order.
fn simplex_lattice(k: usize, deg: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=deg {
        for mut rest in simplex_lattice(k - 1, deg - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Interpolates `Vol(λ₁C₁ + ⋯ + λₙCₙ)` with `λₙ = 1` on the shifted simplex
/// lattice `λᵢ = 1 + μᵢ`, `|μ| ≤ n`, and reads off the `λ₁⋯λₙ` coefficient.
pub fn mixed_volume_interpolated(bodies: &[&Polytope]) -> Rational {
    let n = bodies.len();
    let k = n - 1;
    let nodes = simplex_lattice(k, n);
    let monomials = nodes.clone();
    let values: Vec<Rational> = nodes
        .par_iter()
        .map(|mu| {
            let scaled: Vec<Polytope> = bodies
                .iter()
                .enumerate()
                .map(|(i, b)| if i < k { b.scale(&rat(1 + mu[i] as i64)) } else { (*b).clone() })
                .collect();
            let refs: Vec<&Polytope> = scaled.iter().collect();
            Polytope::sum_all(&refs).expect("bodies share a dimension").volume()
        })
        .collect();
    let matrix: Vec<Vec<Rational>> = nodes
        .iter()
        .map(|mu| {
            monomials
                .iter()
                .map(|e| {
                    let mut x = Rational::one();
                    for (m, &ei) in mu.iter().zip(e) {
                        x *= num_traits::pow(rat(1 + *m as i64), ei);
                    }
                    x
                })
                .collect()
        })
        .collect();
    let coeffs = solve(&matrix, &values).expect("simplex lattice is unisolvent");
    let target = vec![1usize; k];
    let idx = monomials.iter().position(|e| *e == target).expect("monomial present");
    let factorial: BigInt = (1..=n).map(BigInt::from).product();
    &coeffs[idx] / Rational::from_integer(factorial)
}

/// `(1/n)·∫ h_{Cₙ} dS_{C₁,…,Cₙ₋₁}`.
pub fn mixed_volume_measure(bodies: &[&Polytope]) -> Rational {
    let n = bodies.len();
    let (last, rest) = bodies.split_last().expect("at least one body");
    let s = area_atoms_in(n, rest);
    s.integrate(last) / rat(n as i64)
}

/// `S_{C₁,…,Cₙ₋₁}` for `n − 1` bodies in `R^n`.
pub fn mixed_area_atoms(bodies: &[Polytope]) -> Result<SphereMeasure> {
    let n = check_tuple(bodies, |n| n.saturating_sub(1))?;
    let refs: Vec<&Polytope> = bodies.iter().collect();
    Ok(area_atoms_in(n, &refs))
}

/// Atom of the mixed area measure at `u`: the mixed volume of the faces
/// `F(Cᵢ, u)` inside `u^⊥`, as a scale relative to `‖u‖`.
pub(crate) fn atom_scale(bodies: &[&Polytope], u: &Direction) -> Rational {
    let chart = HyperplaneChart::new(u).expect("direction is nonzero");
    let faces: Vec<Polytope> = bodies
        .iter()
        .map(|b| chart.project(&b.support(u).1).expect("chart dimension is supported"))
        .collect();
    let face_refs: Vec<&Polytope> = faces.iter().collect();
    let v = mixed_volume_measure(&face_refs);
    v * chart.det_bv() / Rational::from_integer(u.norm_sq())
}

pub(crate) fn area_atoms_in(n: usize, bodies: &[&Polytope]) -> SphereMeasure {
    let mut measure = SphereMeasure::new(n);
    if bodies.is_empty() {
        debug_assert_eq!(n, 1);
        measure.insert(Direction::from_ints(&[1]).expect("nonzero"), rat(1));
        measure.insert(Direction::from_ints(&[-1]).expect("nonzero"), rat(1));
        return measure;
    }
    let sum = Polytope::sum_all(bodies).expect("bodies share a dimension");
    let rays = sum.fan_rays();
    let scales: Vec<Rational> = rays.par_iter().map(|u| atom_scale(bodies, u)).collect();
    for (u, q) in rays.into_iter().zip(scales) {
        measure.insert(u, q);
    }
    measure
}

#[cfg(test)]
mod tests;
