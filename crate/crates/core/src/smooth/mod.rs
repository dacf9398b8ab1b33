//! Floating-point diagnostics for smooth bodies and smooth functions: mixed
//! discriminants, the smooth density of mixed area measures, the rank
//! condition on restricted Hessians, and rulings of solutions of the mixed
//! Monge–Ampère equation `𝖣₂(∇²f, ∇²g) = 0` in the plane.

mod function;
mod matrix;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub use function::{cylinder, disc, half, harmonic, l4_norm, norm, norm_sq, quotient, SmoothFunction, FD_STEP};
pub use matrix::{mixed_discriminant, SymmetricMatrix, PSD_FLOOR, RANK_TOL};

/// `𝖣₂` values below this count as zero.
pub const ZERO_TOL: f64 = 1e-10;
/// Residual and second-derivative tolerance.
pub const RESIDUAL_TOL: f64 = 1e-6;
/// Hessians with Frobenius norm below this count as zero.
pub const FLAT_TOL: f64 = 1e-7;
/// Spacing of the 3×3 neighborhood used to detect planar regions.
pub const NEIGHBORHOOD: f64 = 1e-3;
/// Sample points used to confirm a ruling.
pub const RULING_SAMPLES: usize = 50;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PanovReason {
    FirstZero,
    SecondZero,
    SharedKernel { kernel: [f64; 2] },
    Nonzero,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PanovVerdict {
    pub zero: bool,
    pub reason: PanovReason,
    pub discriminant: f64,
}

/// Kernel criterion for `𝖣₂(M₁, M₂) = 0` on positive semidefinite `2×2`
/// matrices: one of them vanishes, or both have rank one with the same kernel.
pub fn panov_zero(m1: &SymmetricMatrix, m2: &SymmetricMatrix) -> Result<PanovVerdict> {
    for m in [m1, m2] {
        if m.order() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: m.order() });
        }
        if !m.is_psd() {
            return Err(Error::NotPsd);
        }
    }
    let discriminant = mixed_discriminant(&[m1.clone(), m2.clone()])?;
    let (r1, r2) = (m1.rank(RANK_TOL), m2.rank(RANK_TOL));
    let reason = if r1 == 0 {
        PanovReason::FirstZero
    } else if r2 == 0 {
        PanovReason::SecondZero
    } else if r1 == 1 && r2 == 1 {
        let k1 = &m1.kernel(RANK_TOL)[0];
        let k2 = &m2.kernel(RANK_TOL)[0];
        if cross2(k1, k2).abs() < RANK_TOL.sqrt() {
            PanovReason::SharedKernel { kernel: sign_normalized([k1[0], k1[1]]) }
        } else {
            PanovReason::Nonzero
        }
    } else {
        PanovReason::Nonzero
    };
    Ok(PanovVerdict { zero: reason != PanovReason::Nonzero, reason, discriminant })
}

fn cross2(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Flips `v` so that its first nonzero coordinate is positive.
fn sign_normalized(v: [f64; 2]) -> [f64; 2] {
    let lead = if v[0].abs() > 1e-12 { v[0] } else { v[1] };
    if lead < 0.0 {
        [-v[0], -v[1]]
    } else {
        v
    }
}

/// Orthonormal basis of `u^⊥` as the last `n − 1` columns of the Householder
/// reflection taking `e₁` to the unit vector `u`.
pub fn perp_basis(u: &[f64]) -> DMatrix<f64> {
    let n = u.len();
    let mut v = DVector::from_column_slice(u) * -1.0;
    v[0] += 1.0;
    let vv = v.dot(&v);
    let h = if vv < 1e-24 { DMatrix::identity(n, n) } else { DMatrix::identity(n, n) - &v * v.transpose() * (2.0 / vv) };
    h.columns(1, n - 1).into_owned()
}

fn check_unit(u: &[f64]) -> Result<()> {
    let r = u.iter().map(|c| c * c).sum::<f64>().sqrt();
    if (r - 1.0).abs() > 1e-9 {
        return Err(Error::Invalid(format!("direction has norm {r}, expected 1")));
    }
    Ok(())
}

/// Samples `h(λu) = λh(u)` at a few scales.
fn check_homogeneous(h: &SmoothFunction, u: &[f64]) -> Result<()> {
    let base = h.value(u);
    for lambda in [0.5, 2.0, 3.0] {
        let scaled: Vec<f64> = u.iter().map(|c| lambda * c).collect();
        if (h.value(&scaled) - lambda * base).abs() > 1e-8 * (1.0 + base.abs()) * lambda {
            return Err(Error::NotHomogeneous);
        }
    }
    Ok(())
}

fn restricted_hessians(hs: &[SmoothFunction], u: &[f64]) -> Result<Vec<SymmetricMatrix>> {
    let n = u.len();
    if hs.len() + 1 != n {
        return Err(Error::DimensionMismatch { expected: n - 1, found: hs.len() });
    }
    if let Some(h) = hs.iter().find(|h| h.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: h.dim() });
    }
    let basis = perp_basis(u);
    Ok(hs.iter().map(|h| h.hessian(u).restrict(&basis)).collect())
}

/// Density of `S(C₁, …, Cₙ₋₁)` with respect to spherical Lebesgue measure at
/// `u`: the mixed discriminant of the Hessians `∇²h_{Cᵢ}(u)` restricted to `u^⊥`.
pub fn smooth_density(hs: &[SmoothFunction], u: &[f64]) -> Result<f64> {
    check_unit(u)?;
    for h in hs {
        check_homogeneous(h, u)?;
    }
    mixed_discriminant(&restricted_hessians(hs, u)?)
}

/// Index sets (0-based) with `rank D²h_{C_I}(u) < |I|`.
pub fn rank_failing_sets(hs: &[SmoothFunction], u: &[f64]) -> Result<Vec<Vec<usize>>> {
    check_unit(u)?;
    let ms = restricted_hessians(hs, u)?;
    let failing = (1..=ms.len())
        .flat_map(|k| (0..ms.len()).combinations(k))
        .filter(|set| {
            let sum = set.iter().skip(1).fold(ms[set[0]].clone(), |acc, &i| &acc + &ms[i]);
            sum.rank(RANK_TOL) < set.len()
        })
        .collect();
    Ok(failing)
}

/// Whether `rank D²h_{C_I}(u) ≥ |I|` for every nonempty `I`.
pub fn rank_classify(hs: &[SmoothFunction], u: &[f64]) -> Result<bool> {
    Ok(rank_failing_sets(hs, u)?.is_empty())
}

/// An axis-parallel open rectangle; bounds may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rect {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl Rect {
    pub fn new(lo: [f64; 2], hi: [f64; 2]) -> Self {
        Rect { lo, hi }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        (0..2).all(|i| self.lo[i] < x[i] && x[i] < self.hi[i])
    }
}

/// Cell-centered `nx × ny` grid over a bounded rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub rect: Rect,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn new(rect: Rect, nx: usize, ny: usize) -> Result<Self> {
        if (0..2).any(|i| !rect.lo[i].is_finite() || !rect.hi[i].is_finite() || rect.lo[i] >= rect.hi[i]) {
            return Err(Error::Invalid("grid needs a bounded nonempty rectangle".into()));
        }
        if nx == 0 || ny == 0 {
            return Err(Error::Empty);
        }
        Ok(Grid { rect, nx, ny })
    }

    pub fn nodes(&self) -> Vec<[f64; 2]> {
        let step = |i: usize, k: usize, count: usize| {
            self.rect.lo[i] + (self.rect.hi[i] - self.rect.lo[i]) * (k as f64 + 0.5) / count as f64
        };
        (0..self.ny).flat_map(|j| (0..self.nx).map(move |i| [step(0, i, self.nx), step(1, j, self.ny)])).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualNode {
    pub x: [f64; 2],
    pub residual: f64,
    /// Common kernel direction of the two Hessians, when there is one.
    pub ruling_dir: Option<[f64; 2]>,
}

fn check_planar(f: &SmoothFunction, g: &SmoothFunction) -> Result<()> {
    for h in [f, g] {
        if h.dim() != 2 {
            return Err(Error::UnsupportedDimension(h.dim()));
        }
    }
    Ok(())
}

/// `𝖣₂(∇²f(x), ∇²g(x))` at every grid node.
pub fn mixed_ma_residual(f: &SmoothFunction, g: &SmoothFunction, grid: &Grid) -> Result<Vec<ResidualNode>> {
    check_planar(f, g)?;
    grid.nodes()
        .into_par_iter()
        .map(|x| {
            let (hf, hg) = (f.hessian(&x), g.hessian(&x));
            let residual = mixed_discriminant(&[hf.clone(), hg.clone()])?;
            Ok(ResidualNode { x, residual, ruling_dir: common_kernel(&hf, &hg).ok() })
        })
        .collect()
}

#[derive(Serialize)]
struct CsvRow {
    x1: f64,
    x2: f64,
    residual: f64,
    ruling_dir: String,
}

/// Columns `x1, x2, residual, ruling_dir`; the direction is written as
/// `d1 d2` and left empty when there is none.
pub fn residual_csv(nodes: &[ResidualNode]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for node in nodes {
        let ruling_dir = node.ruling_dir.map(|d| format!("{} {}", d[0], d[1])).unwrap_or_default();
        w.serialize(CsvRow { x1: node.x[0], x2: node.x[1], residual: node.residual, ruling_dir })
            .map_err(|e| Error::Invalid(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Invalid(e.to_string()))
}

/// Unit kernel direction of a rank-one matrix, `None` if the rank is not one.
fn rank_one_kernel(m: &SymmetricMatrix) -> Option<[f64; 2]> {
    let (values, vectors) = m.eigen();
    let (small, large) = if values[0].abs() <= values[1].abs() { (0, 1) } else { (1, 0) };
    (values[small].abs() <= RESIDUAL_TOL * values[large].abs()).then(|| [vectors[small][0], vectors[small][1]])
}

/// Common kernel direction of two `2×2` Hessians, where a vanishing Hessian
/// imposes no condition.
fn common_kernel(hf: &SymmetricMatrix, hg: &SymmetricMatrix) -> Result<[f64; 2]> {
    let kernels: Vec<Option<[f64; 2]>> =
        [hf, hg].into_iter().filter(|m| m.norm() >= FLAT_TOL).map(rank_one_kernel).collect();
    let dirs: Vec<[f64; 2]> = kernels.into_iter().collect::<Option<_>>().ok_or(Error::NoCommonKernel)?;
    match dirs.as_slice() {
        [] => Err(Error::NoCommonKernel),
        [d] => Ok(sign_normalized(*d)),
        [a, b] => {
            if (a[0] * b[1] - a[1] * b[0]).abs() < RESIDUAL_TOL {
                Ok(sign_normalized(*a))
            } else {
                Err(Error::NoCommonKernel)
            }
        }
        _ => unreachable!("two Hessians"),
    }
}

/// Whether every Hessian of `h` on the 3×3 neighborhood of `x` is flat.
fn in_planar_region(h: &SmoothFunction, x: [f64; 2]) -> bool {
    (-1..=1).cartesian_product(-1..=1).all(|(i, j)| {
        let y = [x[0] + i as f64 * NEIGHBORHOOD, x[1] + j as f64 * NEIGHBORHOOD];
        h.hessian(&y).norm() < FLAT_TOL
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothRuling {
    pub direction: [f64; 2],
    pub start: [f64; 2],
    pub end: [f64; 2],
    /// Largest `|⟨d, ∇²f d⟩|` or `|⟨d, ∇²g d⟩|` over the sample points.
    pub max_second_derivative: f64,
}

/// The line through `x` on which `f` and `g` are simultaneously affine,
/// traced to the boundary of `D`.
pub fn hn_ruling(f: &SmoothFunction, g: &SmoothFunction, d: &Rect, x: [f64; 2]) -> Result<SmoothRuling> {
    check_planar(f, g)?;
    if !d.contains(&x) {
        return Err(Error::OutsideDomain);
    }
    if in_planar_region(f, x) || in_planar_region(g, x) {
        return Err(Error::InPlanarRegion);
    }
    let (hf, hg) = (f.hessian(&x), g.hessian(&x));
    if mixed_discriminant(&[hf.clone(), hg.clone()])?.abs() > RESIDUAL_TOL {
        return Err(Error::Invalid("mixed Monge-Ampere residual is nonzero at x".into()));
    }
    let dir = common_kernel(&hf, &hg)?;
    let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..2 {
        if dir[i].abs() > 1e-15 {
            let (a, b) = ((d.lo[i] - x[i]) / dir[i], (d.hi[i] - x[i]) / dir[i]);
            t0 = t0.max(a.min(b));
            t1 = t1.min(a.max(b));
        }
    }
    if !t0.is_finite() || !t1.is_finite() {
        return Err(Error::Invalid("ruling is unbounded in the domain".into()));
    }
    let at = |t: f64| [x[0] + t * dir[0], x[1] + t * dir[1]];
    let max_second_derivative = (0..RULING_SAMPLES)
        .map(|k| at(t0 + (t1 - t0) * (k as f64 + 0.5) / RULING_SAMPLES as f64))
        .flat_map(|p| [f.hessian(&p).quadratic_form(&dir).abs(), g.hessian(&p).quadratic_form(&dir).abs()])
        .fold(0.0, f64::max);
    if max_second_derivative >= RESIDUAL_TOL {
        return Err(Error::NoCommonKernel);
    }
    Ok(SmoothRuling { direction: dir, start: at(t0), end: at(t1), max_second_derivative })
}
