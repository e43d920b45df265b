//! Numeric abstraction shared by every solver.
//!
//! All algorithms are written against [`Scalar`], which is implemented for
//! `f32`, `f64` and the exact rational types from `num-rational`. Exact
//! rationals give tie-stable density comparisons and bit-reproducible
//! outputs; floats are handy for quick experiments and for the bound tables.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, ToPrimitive, Zero};

/// A number type the solvers can compute with.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `true` when arithmetic is exact (rationals).
    const EXACT: bool;

    /// Builds `numer / denom`. Panics on a zero denominator.
    fn from_ratio(numer: i64, denom: i64) -> Self;

    /// Parses `"3/2"`, `"7"` or a decimal literal such as `"0.25"`.
    /// Exact types parse decimals without rounding.
    fn parse_literal(text: &str) -> Option<Self>;

    /// Canonical textual form; `parse_literal(to_literal(x)) == x`.
    fn to_literal(&self) -> String;

    fn of_usize(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize fits the scalar type")
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        numer as f64 / denom as f64
    }

    fn parse_literal(text: &str) -> Option<Self> {
        let text = text.trim();
        match text.split_once('/') {
            Some((n, d)) => {
                let d: f64 = d.trim().parse().ok()?;
                if d == 0.0 {
                    return None;
                }
                Some(n.trim().parse::<f64>().ok()? / d)
            }
            None => text.parse().ok(),
        }
    }

    fn to_literal(&self) -> String {
        format!("{self}")
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        (numer as f64 / denom as f64) as f32
    }

    fn parse_literal(text: &str) -> Option<Self> {
        f64::parse_literal(text).map(|x| x as f32)
    }

    fn to_literal(&self) -> String {
        format!("{self}")
    }
}

/// Splits a decimal literal into (digits, number of fractional digits).
fn decimal_parts(text: &str) -> Option<(String, usize)> {
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut digits = String::with_capacity(body.len() + 1);
    if negative {
        digits.push('-');
    }
    digits.push_str(if whole.is_empty() { "0" } else { whole });
    digits.push_str(frac);
    Some((digits, frac.len()))
}

macro_rules! rational_scalar {
    ($int:ty, $from_i64:expr) => {
        impl Scalar for Ratio<$int> {
            const EXACT: bool = true;

            fn from_ratio(numer: i64, denom: i64) -> Self {
                assert!(denom != 0, "zero denominator");
                Ratio::new($from_i64(numer), $from_i64(denom))
            }

            fn parse_literal(text: &str) -> Option<Self> {
                let text = text.trim();
                if let Some((n, d)) = text.split_once('/') {
                    let n = <$int as Num>::from_str_radix(n.trim(), 10).ok()?;
                    let d = <$int as Num>::from_str_radix(d.trim(), 10).ok()?;
                    if d.is_zero() {
                        return None;
                    }
                    return Some(Ratio::new(n, d));
                }
                let (digits, scale) = decimal_parts(text)?;
                let numer = <$int as Num>::from_str_radix(&digits, 10).ok()?;
                let ten: $int = $from_i64(10);
                let denom = num_traits::checked_pow(ten, scale)?;
                Some(Ratio::new(numer, denom))
            }

            fn to_literal(&self) -> String {
                if self.denom() == &$from_i64(1) {
                    format!("{}", self.numer())
                } else {
                    format!("{}/{}", self.numer(), self.denom())
                }
            }
        }
    };
}

rational_scalar!(i64, |x: i64| x);
rational_scalar!(i128, |x: i64| x as i128);
rational_scalar!(BigInt, BigInt::from);

/// Total order on scalars; incomparable values (NaN) compare equal.
pub fn cmp<T: Scalar>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

pub fn max_of<T: Scalar>(a: &T, b: &T) -> T {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn min_of<T: Scalar>(a: &T, b: &T) -> T {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// `max(0, target - current)`: the raise needed to reach `target`.
pub fn shortfall<T: Scalar>(target: &T, current: &T) -> T {
    if target > current {
        target.clone() - current.clone()
    } else {
        T::zero()
    }
}

/// Compares `a/b` with `c/d` for positive denominators without dividing.
pub fn cmp_fractions<T: Scalar>(a: &T, b: &T, c: &T, d: &T) -> Ordering {
    cmp(&(a.clone() * d.clone()), &(c.clone() * b.clone()))
}
