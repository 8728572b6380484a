//! Arithmetic backends.
//!
//! Every matrix and realization in the crate is generic over [`Scalar`].
//! Two implementations exist: exact rationals ([`Rational`]) and `f64`.
//! Rank decisions are delegated to the scalar type so that exact inputs
//! use elimination and floating inputs use a singular value threshold.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::linalg::{self, RankKernel};
use crate::matrix::Matrix;

/// Arbitrary precision rational number.
pub type Rational = num::BigRational;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` for rationals.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn to_f64(&self) -> f64;

    fn from_rational(q: &Rational) -> Self;

    /// `None` for exact scalars, which refuse float input.
    fn from_f64(x: f64) -> Option<Self>;

    /// Exact zero for rationals; `|x| <= tol * max(1, scale)` for floats.
    fn negligible(&self, scale: f64, tol: f64) -> bool;

    /// Rank and right kernel basis.
    fn rank_kernel(m: &Matrix<Self>, rel_threshold: f64) -> RankKernel<Self>;

    /// Solves `a x = b`; `None` when inconsistent. Floats use a minimum
    /// norm least squares solution accepted if its residual is negligible.
    fn solve(a: &Matrix<Self>, b: &[Self], rel_threshold: f64) -> Option<Vec<Self>>;

    /// JSON form used in reports: `"num/den"` strings or plain numbers.
    fn to_json(&self) -> Value;

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }

    fn is_negative(&self) -> bool {
        self.to_f64() < 0.0
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        // Large numerators/denominators overflow f64 independently; divide
        // after scaling when needed.
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => {
                let shift = self.denom().bits().max(self.numer().bits()).saturating_sub(1000);
                let n = (self.numer() >> shift as usize).to_f64().unwrap_or(f64::NAN);
                let d = (self.denom() >> shift as usize).to_f64().unwrap_or(f64::NAN);
                n / d
            }
        }
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn from_f64(_x: f64) -> Option<Self> {
        None
    }

    fn negligible(&self, _scale: f64, _tol: f64) -> bool {
        self.is_zero()
    }

    fn rank_kernel(m: &Matrix<Self>, _rel_threshold: f64) -> RankKernel<Self> {
        linalg::exact::rank_kernel(m)
    }

    fn solve(a: &Matrix<Self>, b: &[Self], _rel_threshold: f64) -> Option<Vec<Self>> {
        linalg::exact::solve(a, b)
    }

    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_rational(q: &Rational) -> Self {
        Scalar::to_f64(q)
    }

    fn from_f64(x: f64) -> Option<Self> {
        Some(x)
    }

    fn negligible(&self, scale: f64, tol: f64) -> bool {
        self.abs() <= tol * scale.max(1.0)
    }

    fn rank_kernel(m: &Matrix<Self>, rel_threshold: f64) -> RankKernel<Self> {
        linalg::float::rank_kernel(m, rel_threshold)
    }

    fn solve(a: &Matrix<Self>, b: &[Self], rel_threshold: f64) -> Option<Vec<Self>> {
        let x = linalg::float::lstsq(a, b, rel_threshold);
        let r = a.mul_vec(&x);
        let scale = a.max_abs() * x.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
            + b.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let tol = 1e-8 * scale.max(1.0);
        r.iter().zip(b).all(|(u, v)| (u - v).abs() <= tol).then_some(x)
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }
}

/// `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"n"`, `"n/d"`, or a finite decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse().ok()?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let frac_part: BigInt = frac.parse().ok()?;
        let scale = num::pow(BigInt::from(10), frac.len());
        let mag = int_part.abs() * &scale + frac_part;
        let num = if negative { -mag } else { mag };
        return Some(Rational::new(num, scale));
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_forms() {
        assert_eq!(parse_rational("3/6"), Some(Rational::from_ratio(1, 2)));
        assert_eq!(parse_rational("-7"), Some(Rational::from_i64(-7)));
        assert_eq!(parse_rational("-0.25"), Some(Rational::from_ratio(-1, 4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(format_rational(&Rational::from_ratio(-6, 4)), "-3/2");
        assert_eq!(format_rational(&Rational::from_i64(5)), "5");
    }

    #[test]
    fn huge_rational_to_f64() {
        let big = num::pow(BigInt::from(10), 400);
        let q = Rational::new(big.clone() * 3, big);
        assert!((Scalar::to_f64(&q) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn float_negligible_is_relative() {
        assert!(1e-10_f64.negligible(1.0, 1e-9));
        assert!(!1e-8_f64.negligible(1.0, 1e-9));
        assert!(1e-8_f64.negligible(100.0, 1e-9));
    }
}
