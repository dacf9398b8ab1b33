use std::ops::{Add, Mul};

use itertools::Itertools;
use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Eigenvalue floor for the positive semidefinite test.
pub const PSD_FLOOR: f64 = -1e-10;
/// Singular values at or below this count as zero.
pub const RANK_TOL: f64 = 1e-8;

/// A real symmetric matrix. Construction symmetrizes `(A + Aᵀ)/2` and
/// rejects inputs that are far from symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix(DMatrix<f64>);

impl SymmetricMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        let asym = (&m - m.transpose()).norm();
        if asym > 1e-8 * (1.0 + m.norm()) {
            return Err(Error::Invalid("matrix is not symmetric".into()));
        }
        Ok(SymmetricMatrix((&m + m.transpose()) * 0.5))
    }

    /// `(A + Aᵀ)/2` without a symmetry check, for numerically computed Hessians.
    pub fn symmetrized(m: DMatrix<f64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "square matrix");
        SymmetricMatrix((&m + m.transpose()) * 0.5)
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let m = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != m) {
            return Err(Error::DimensionMismatch { expected: m, found: r.len() });
        }
        SymmetricMatrix::new(DMatrix::from_fn(m, m, |i, j| rows[i][j]))
    }

    pub fn identity(m: usize) -> Self {
        SymmetricMatrix(DMatrix::identity(m, m))
    }

    pub fn zeros(m: usize) -> Self {
        SymmetricMatrix(DMatrix::zeros(m, m))
    }

    pub fn diagonal(d: &[f64]) -> Self {
        SymmetricMatrix(DMatrix::from_diagonal(&DVector::from_column_slice(d)))
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// Eigenvalues in ascending order with matching unit eigenvectors.
    pub fn eigen(&self) -> (Vec<f64>, Vec<DVector<f64>>) {
        let e = SymmetricEigen::new(self.0.clone());
        let order: Vec<usize> = (0..self.order()).sorted_by(|&i, &j| e.eigenvalues[i].total_cmp(&e.eigenvalues[j])).collect();
        let values = order.iter().map(|&i| e.eigenvalues[i]).collect();
        let vectors = order.iter().map(|&i| e.eigenvectors.column(i).into_owned()).collect();
        (values, vectors)
    }

    pub fn is_psd(&self) -> bool {
        self.eigen().0.first().map_or(true, |&l| l >= PSD_FLOOR)
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.eigen().0.iter().filter(|l| l.abs() > tol).count()
    }

    /// Unit eigenvectors whose eigenvalues are at most `tol` in absolute value.
    pub fn kernel(&self, tol: f64) -> Vec<DVector<f64>> {
        let (values, vectors) = self.eigen();
        values.iter().zip(vectors).filter(|(l, _)| l.abs() <= tol).map(|(_, v)| v).collect()
    }

    /// `Bᵀ M B` for a matrix `B` whose columns span the target subspace.
    pub fn restrict(&self, basis: &DMatrix<f64>) -> SymmetricMatrix {
        let r = basis.transpose() * &self.0 * basis;
        SymmetricMatrix((&r + r.transpose()) * 0.5)
    }

    /// `vᵀ M v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        let v = DVector::from_column_slice(v);
        v.dot(&(&self.0 * &v))
    }
}

impl Add for &SymmetricMatrix {
    type Output = SymmetricMatrix;

    fn add(self, rhs: &SymmetricMatrix) -> SymmetricMatrix {
        SymmetricMatrix(&self.0 + &rhs.0)
    }
}

impl Mul<f64> for &SymmetricMatrix {
    type Output = SymmetricMatrix;

    fn mul(self, c: f64) -> SymmetricMatrix {
        SymmetricMatrix(&self.0 * c)
    }
}

/// `𝖣_m(M₁, …, M_m)`, the coefficient of `λ₁⋯λ_m` in
/// `det(λ₁M₁ + ⋯ + λ_mM_m)` divided by `m!`.
///
/// Expanding the determinant column by column, that coefficient is the sum
/// over permutations `σ` of `det[M_{σ(1)}e₁ | ⋯ | M_{σ(m)}e_m]`.
pub fn mixed_discriminant(ms: &[SymmetricMatrix]) -> Result<f64> {
    let m = ms.len();
    if m == 0 {
        return Err(Error::Empty);
    }
    if m > 4 {
        return Err(Error::UnsupportedDimension(m));
    }
    if let Some(bad) = ms.iter().find(|a| a.order() != m) {
        return Err(Error::DimensionMismatch { expected: m, found: bad.order() });
    }
    let mut total = 0.0;
    for sigma in (0..m).permutations(m) {
        let cols = DMatrix::from_fn(m, m, |i, k| ms[sigma[k]].0[(i, k)]);
        total += cols.determinant();
    }
    let factorial: f64 = (1..=m).map(|k| k as f64).product();
    Ok(total / factorial)
}
