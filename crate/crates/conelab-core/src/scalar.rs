//! Scalar substrate shared by the exact and floating measure modes.
//!
//! Exact mode works over arbitrary-precision rationals and is authoritative
//! for every support-theoretic check; float mode exists for FFT-scale work
//! and file interchange. The [`Scalar`] trait captures exactly the behaviour
//! the measure algebra needs from either mode: ring arithmetic, a total
//! coordinate order for canonical sorting, merge equality for atom
//! locations, and a post-arithmetic pruning rule for weights.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational scalar of the exact mode.
pub type Rational = num_rational::BigRational;

/// Relative weight-pruning threshold of float mode: after every arithmetic
/// operation, atoms with `|w| <= threshold * max|w|` are dropped.
pub const FLOAT_ZERO_THRESHOLD: f64 = 1e-12;

/// Relative coordinate-merge threshold of float mode.
pub const FLOAT_COORD_THRESHOLD: f64 = 1e-12;

/// Absolute comparison tolerance used by float-mode support queries.
pub const FLOAT_SUPP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational `{}`: {}", self.input, self.reason)
    }
}

/// Parses `"p"` or `"p/q"` with arbitrary-precision integers, `q > 0`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError {
        input: String::from(s),
        reason,
    };
    let s = s.trim();
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let numerator: BigInt = num_str.parse().map_err(|_| err("bad numerator"))?;
    let denominator: BigInt = match den_str {
        Some(d) => d.parse().map_err(|_| err("bad denominator"))?,
        None => BigInt::one(),
    };
    if denominator.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(numerator, denominator))
}

/// Formats a rational as `"p"` (integers) or `"p/q"`, always in lowest terms.
pub fn format_rational(r: &Rational) -> String {
    use alloc::format;
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Lossy conversion for report approximations; exact values stay rational.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Denominator or numerator too large for direct conversion: shift both
    // down together, which preserves the quotient.
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(60);
    let num = r.numer() >> shift;
    let den = r.denom() >> shift;
    let n = num.to_f64().unwrap_or(match num.sign() {
        Sign::Minus => f64::NEG_INFINITY,
        _ => f64::INFINITY,
    });
    let d = den.to_f64().unwrap_or(f64::INFINITY);
    n / d
}

/// Scalar of a measure mode. Implemented by [`Rational`] (exact mode) and
/// `f64` (float mode).
pub trait Scalar:
    Clone + PartialEq + PartialOrd + fmt::Debug + Zero + One + Signed + core::ops::Neg<Output = Self>
{
    /// True for the exact mode; checks that demand exact cancellation
    /// detection refuse to run when this is false.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    fn from_rational(r: &Rational) -> Self;

    fn to_f64_lossy(&self) -> f64;

    /// Total order used for canonical lexicographic sorting of atoms.
    fn total_cmp(&self, other: &Self) -> Ordering;

    /// Whether a weight should be pruned, given the largest absolute weight
    /// of the canonicalized measure.
    fn negligible_against(&self, max_abs: &Self) -> bool;

    /// Coordinate equality used when merging duplicate atom locations.
    fn coord_eq(&self, other: &Self) -> bool;

    /// Rejects values a measure must not contain (float NaN/infinity).
    fn is_admissible(&self) -> bool;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64_lossy(&self) -> f64 {
        rational_to_f64(self)
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    fn negligible_against(&self, _max_abs: &Self) -> bool {
        self.is_zero()
    }

    fn coord_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn is_admissible(&self) -> bool {
        true
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }

    fn negligible_against(&self, max_abs: &Self) -> bool {
        self.abs() <= FLOAT_ZERO_THRESHOLD * max_abs
    }

    fn coord_eq(&self, other: &Self) -> bool {
        let scale = 1.0_f64.max(self.abs()).max(other.abs());
        (self - other).abs() <= FLOAT_COORD_THRESHOLD * scale
    }

    fn is_admissible(&self) -> bool {
        self.is_finite()
    }
}
