use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::matrix::SymmetricMatrix;

/// Finite-difference step.
pub const FD_STEP: f64 = 1e-5;

type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type VectorFn = Arc<dyn Fn(&[f64]) -> DVector<f64> + Send + Sync>;
type MatrixFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;

/// A named `C²` function on an open subset of `Rⁿ`. Gradient and Hessian
/// fall back to central differences when no closed form is attached.
#[derive(Clone)]
pub struct SmoothFunction {
    name: String,
    dim: usize,
    value: ScalarFn,
    gradient: Option<VectorFn>,
    hessian: Option<MatrixFn>,
}

impl fmt::Debug for SmoothFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothFunction")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("closed_gradient", &self.gradient.is_some())
            .field("closed_hessian", &self.hessian.is_some())
            .finish()
    }
}

impl SmoothFunction {
    pub fn new(name: impl Into<String>, dim: usize, value: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        SmoothFunction { name: name.into(), dim, value: Arc::new(value), gradient: None, hessian: None }
    }

    pub fn with_gradient(mut self, g: impl Fn(&[f64]) -> DVector<f64> + Send + Sync + 'static) -> Self {
        self.gradient = Some(Arc::new(g));
        self
    }

    pub fn with_hessian(mut self, h: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static) -> Self {
        self.hessian = Some(Arc::new(h));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn has_closed_hessian(&self) -> bool {
        self.hessian.is_some()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }

    pub fn gradient(&self, x: &[f64]) -> DVector<f64> {
        match &self.gradient {
            Some(g) => g(x),
            None => self.fd_gradient(x),
        }
    }

    pub fn hessian(&self, x: &[f64]) -> SymmetricMatrix {
        match &self.hessian {
            Some(h) => SymmetricMatrix::symmetrized(h(x)),
            None => self.fd_hessian(x),
        }
    }

    pub fn fd_gradient(&self, x: &[f64]) -> DVector<f64> {
        DVector::from_fn(self.dim, |i, _| {
            let (p, m) = shifted(x, i, FD_STEP);
            (self.value(&p) - self.value(&m)) / (2.0 * FD_STEP)
        })
    }

    /// Central differences of the gradient when it is known in closed form,
    /// otherwise second differences of the value.
    pub fn fd_hessian(&self, x: &[f64]) -> SymmetricMatrix {
        let n = self.dim;
        let h = FD_STEP;
        let m = match &self.gradient {
            Some(g) => {
                let mut m = DMatrix::zeros(n, n);
                for j in 0..n {
                    let (p, q) = shifted(x, j, h);
                    m.set_column(j, &((g(&p) - g(&q)) / (2.0 * h)));
                }
                m
            }
            None => DMatrix::from_fn(n, n, |i, j| {
                let at = |si: f64, sj: f64| {
                    let mut y = x.to_vec();
                    y[i] += si * h;
                    y[j] += sj * h;
                    self.value(&y)
                };
                (at(1.0, 1.0) - at(1.0, -1.0) - at(-1.0, 1.0) + at(-1.0, -1.0)) / (4.0 * h * h)
            }),
        };
        SymmetricMatrix::symmetrized(m)
    }

    /// `c · f`.
    pub fn scaled(&self, c: f64) -> SmoothFunction {
        let (v, g, h) = (self.value.clone(), self.gradient.clone(), self.hessian.clone());
        SmoothFunction {
            name: format!("{c}*{}", self.name),
            dim: self.dim,
            value: Arc::new(move |x| c * v(x)),
            gradient: g.map(|g| Arc::new(move |x: &[f64]| g(x) * c) as VectorFn),
            hessian: h.map(|h| Arc::new(move |x: &[f64]| h(x) * c) as MatrixFn),
        }
    }

    /// Functions available by name. Names: `norm`, `norm_sq`, `l4_norm`,
    /// `disc` (all in any `dim ≥ 2`), `harmonic`, `cylinder`, `quotient`,
    /// `half_right`, `half_left` (plane only).
    pub fn registry(name: &str, dim: usize) -> Option<SmoothFunction> {
        let planar = dim == 2;
        match name {
            "norm" => Some(norm(dim)),
            "norm_sq" => Some(norm_sq(dim)),
            "l4_norm" => Some(l4_norm(dim)),
            "disc" if dim >= 2 => Some(disc(dim)),
            "harmonic" if planar => Some(harmonic()),
            "cylinder" if planar => Some(cylinder()),
            "quotient" if planar => Some(quotient()),
            "half_right" if planar => Some(half(true)),
            "half_left" if planar => Some(half(false)),
            _ => None,
        }
    }

    pub const REGISTRY_NAMES: [&'static str; 9] =
        ["norm", "norm_sq", "l4_norm", "disc", "harmonic", "cylinder", "quotient", "half_right", "half_left"];
}

fn shifted(x: &[f64], i: usize, h: f64) -> (Vec<f64>, Vec<f64>) {
    let mut p = x.to_vec();
    let mut m = x.to_vec();
    p[i] += h;
    m[i] -= h;
    (p, m)
}

fn euclid(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// `‖x‖`, the support function of the unit ball.
pub fn norm(n: usize) -> SmoothFunction {
    SmoothFunction::new("norm", n, euclid)
        .with_gradient(|x| DVector::from_column_slice(x) / euclid(x))
        .with_hessian(|x| {
            let r = euclid(x);
            let v = DVector::from_column_slice(x) / r;
            (DMatrix::identity(x.len(), x.len()) - &v * v.transpose()) / r
        })
}

/// `‖x‖²`.
pub fn norm_sq(n: usize) -> SmoothFunction {
    SmoothFunction::new("norm_sq", n, |x| x.iter().map(|c| c * c).sum())
        .with_gradient(|x| DVector::from_column_slice(x) * 2.0)
        .with_hessian(|x| DMatrix::identity(x.len(), x.len()) * 2.0)
}

/// `‖x‖₄`, the support function of the unit ball of `ℓ_{4/3}`.
pub fn l4_norm(n: usize) -> SmoothFunction {
    let q = |x: &[f64]| x.iter().map(|c| c.powi(4)).sum::<f64>().powf(0.25);
    SmoothFunction::new("l4_norm", n, q)
        .with_gradient(move |x| {
            let r3 = q(x).powi(3);
            DVector::from_iterator(x.len(), x.iter().map(|c| c.powi(3) / r3))
        })
        .with_hessian(move |x| {
            let r = q(x);
            DMatrix::from_fn(x.len(), x.len(), |i, j| {
                let diag = if i == j { 3.0 * x[i] * x[i] / r.powi(3) } else { 0.0 };
                diag - 3.0 * x[i].powi(3) * x[j].powi(3) / r.powi(7)
            })
        })
}

/// `√(x₁² + x₂²)`, the support function of the unit disc in the `x₁x₂` plane.
pub fn disc(n: usize) -> SmoothFunction {
    SmoothFunction::new("disc", n, |x| euclid(&x[..2]))
        .with_gradient(|x| {
            let r = euclid(&x[..2]);
            DVector::from_fn(x.len(), |i, _| if i < 2 { x[i] / r } else { 0.0 })
        })
        .with_hessian(|x| {
            let r = euclid(&x[..2]);
            DMatrix::from_fn(x.len(), x.len(), |i, j| {
                if i >= 2 || j >= 2 {
                    0.0
                } else {
                    let d = if i == j { 1.0 } else { 0.0 };
                    (d - x[i] * x[j] / (r * r)) / r
                }
            })
        })
}

/// `x₁² − x₂²`.
pub fn harmonic() -> SmoothFunction {
    SmoothFunction::new("harmonic", 2, |x| x[0] * x[0] - x[1] * x[1])
        .with_gradient(|x| DVector::from_vec(vec![2.0 * x[0], -2.0 * x[1]]))
        .with_hessian(|_| DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, -2.0])))
}

/// `x₁²`, ruled by lines parallel to `e₂`.
pub fn cylinder() -> SmoothFunction {
    SmoothFunction::new("cylinder", 2, |x| x[0] * x[0])
        .with_gradient(|x| DVector::from_vec(vec![2.0 * x[0], 0.0]))
        .with_hessian(|_| DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 0.0])))
}

fn quotient_value(x: &[f64]) -> f64 {
    x[0] * x[0] / (1.0 - x[1] * x[1])
}

fn quotient_gradient(x: &[f64]) -> DVector<f64> {
    let s = 1.0 - x[1] * x[1];
    DVector::from_vec(vec![2.0 * x[0] / s, 2.0 * x[0] * x[0] * x[1] / (s * s)])
}

fn quotient_hessian(x: &[f64]) -> DMatrix<f64> {
    let s = 1.0 - x[1] * x[1];
    let h11 = 2.0 / s;
    let h12 = 4.0 * x[0] * x[1] / (s * s);
    let h22 = 2.0 * x[0] * x[0] * (1.0 + 3.0 * x[1] * x[1]) / s.powi(3);
    DMatrix::from_row_slice(2, 2, &[h11, h12, h12, h22])
}

/// `x₁² / (1 − x₂²)` on `R × (−1, 1)`.
pub fn quotient() -> SmoothFunction {
    SmoothFunction::new("quotient", 2, quotient_value)
        .with_gradient(quotient_gradient)
        .with_hessian(quotient_hessian)
}

/// The quotient on one side of the line `x₁ = 0` and zero on the other.
/// Derivatives on the line itself are the one-sided ones from the side where
/// the function is the quotient.
pub fn half(right: bool) -> SmoothFunction {
    let on = move |x: &[f64]| if right { x[0] >= 0.0 } else { x[0] <= 0.0 };
    let name = if right { "half_right" } else { "half_left" };
    SmoothFunction::new(name, 2, move |x| if on(x) { quotient_value(x) } else { 0.0 })
        .with_gradient(move |x| if on(x) { quotient_gradient(x) } else { DVector::zeros(2) })
        .with_hessian(move |x| if on(x) { quotient_hessian(x) } else { DMatrix::zeros(2, 2) })
}
