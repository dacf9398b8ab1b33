//! Exact rational scalars and vectors.
//!
//! Every polytope computation in this crate runs over [`Rational`], an
//! arbitrary-precision fraction kept in lowest terms with positive
//! denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;
pub type RVec = Vec<Rational>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rvec(xs: &[i64]) -> RVec {
    xs.iter().map(|&x| rat(x)).collect()
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::Parse(format!("invalid rational {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, dec)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), dec);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let mut n: BigInt = digits.parse().map_err(|_| err())?;
        if neg {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), dec.len());
        return Ok(Rational::new(n, d));
    }
    let n: BigInt = s.parse().map_err(|_| err())?;
    Ok(Rational::from_integer(n))
}

/// Canonical `"p/q"` string (or `"p"` for integers).
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Nearest rational with denominator `2^bits`.
pub fn from_f64_approx(x: f64, bits: u32) -> Rational {
    let scale = (1u64 << bits) as f64;
    let n = (x * scale).round();
    Rational::new(BigInt::from(n as i64), BigInt::from(1u64 << bits))
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[Rational], b: &[Rational]) -> RVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Rational], b: &[Rational]) -> RVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[Rational], s: &Rational) -> RVec {
    a.iter().map(|x| x * s).collect()
}

pub fn is_zero_vec(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Scales a nonzero rational vector to the primitive integer vector on the
/// same ray. Returns `None` for the zero vector.
pub fn primitive_integer(a: &[Rational]) -> Option<Vec<BigInt>> {
    if is_zero_vec(a) {
        return None;
    }
    let lcm = a
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = a
        .iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints
        .iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Some(ints.into_iter().map(|x| x / &g).collect())
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}
