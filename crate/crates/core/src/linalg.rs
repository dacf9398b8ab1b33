//! Exact linear algebra over the rationals. Matrices are row-major `Vec<RVec>`.

use num_traits::{One, Zero};

use crate::rational::{dot, RVec, Rational};

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[RVec], ncols: usize) -> (Vec<RVec>, Vec<usize>) {
    let mut m: Vec<RVec> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[RVec], ncols: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    rref(rows, ncols).1.len()
}

/// Basis of `{x : row · x = 0 for every row}`, one vector per free column,
/// read off the reduced row echelon form (hence canonical).
pub fn kernel(rows: &[RVec], ncols: usize) -> Vec<RVec> {
    let (m, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

pub fn det(m: &[RVec]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut a = m.to_vec();
    let mut result = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            result = -result;
        }
        let pivot = a[c][c].clone();
        result *= &pivot;
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &pivot;
            for j in c..n {
                let d = &f * &a[c][j];
                a[i][j] -= d;
            }
        }
    }
    result
}

/// Solves the square system `m x = b`; `None` if singular.
pub fn solve(m: &[RVec], b: &[Rational]) -> Option<RVec> {
    let n = m.len();
    let aug: Vec<RVec> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, n + 1);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(r.iter().map(|row| row[n].clone()).collect())
}

/// Solves a possibly overdetermined system `sum_j x_j cols[j] = target`.
/// Returns `None` if inconsistent or if the columns are dependent.
pub fn solve_columns(cols: &[RVec], target: &[Rational]) -> Option<RVec> {
    let n = target.len();
    let k = cols.len();
    let rows: Vec<RVec> = (0..n)
        .map(|i| {
            let mut r: RVec = cols.iter().map(|c| c[i].clone()).collect();
            r.push(target[i].clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&rows, k + 1);
    if pivots.contains(&k) || pivots.len() != k {
        return None;
    }
    Some(r.iter().take(k).map(|row| row[k].clone()).collect())
}

pub fn inverse(m: &[RVec]) -> Option<Vec<RVec>> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let aug: Vec<RVec> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Orthogonal projection of `v` onto the span of `basis` (any spanning set of
/// independent vectors).
pub fn project_onto_span(v: &[Rational], basis: &[RVec]) -> RVec {
    if basis.is_empty() {
        return vec![Rational::zero(); v.len()];
    }
    let gram: Vec<RVec> = basis
        .iter()
        .map(|a| basis.iter().map(|b| dot(a, b)).collect())
        .collect();
    let rhs: RVec = basis.iter().map(|a| dot(a, v)).collect();
    let coeffs = solve(&gram, &rhs).expect("projection basis must be independent");
    let mut out = vec![Rational::zero(); v.len()];
    for (c, a) in coeffs.iter().zip(basis) {
        for (o, x) in out.iter_mut().zip(a) {
            *o += c * x;
        }
    }
    out
}

/// Projection of `v` onto the orthogonal complement of `span(basis)`.
pub fn project_off_span(v: &[Rational], basis: &[RVec]) -> RVec {
    let p = project_onto_span(v, basis);
    v.iter().zip(&p).map(|(a, b)| a - b).collect()
}

/// Independent rows chosen greedily in order.
pub fn independent_subset(rows: &[RVec], ncols: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut acc: Vec<RVec> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        acc.push(r.clone());
        if rank(&acc, ncols) == acc.len() {
            chosen.push(i);
        } else {
            acc.pop();
        }
    }
    chosen
}
