//! Scalar fields the library computes over.
//!
//! Two modes are supported: 64-bit floats, compared against a tolerance, and
//! arbitrary-precision rationals, compared exactly. Every geometric type in
//! the crate is generic over [`Scalar`].

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

/// Default tolerance for float mode.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Exact rational scalar.
pub type Rational = BigRational;

/// A real scalar field usable for matrices, vectors and quadratic forms.
pub trait Scalar:
    Signed + PartialOrd + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// True when arithmetic is exact and tolerances are ignored.
    const EXACT: bool;

    /// Square root, when it exists in the field. Rationals only return
    /// roots of perfect squares.
    fn sqrt(&self) -> Option<Self>;

    /// Best-effort conversion to `f64` for reporting.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Embed an integer.
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every field contains the integers")
    }

    /// Convert a tolerance into this field; exact fields always use zero.
    fn tolerance(tol: f64) -> Self {
        if Self::EXACT {
            Self::zero()
        } else {
            Self::from_f64(tol).unwrap_or_else(Self::zero)
        }
    }

    /// `|self| <= tol`. Exact fields test `self == 0`.
    fn is_negligible(&self, tol: &Self) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.abs() <= *tol
        }
    }

    fn half(&self) -> Self {
        self.clone() / Self::from_int(2)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let (n, d) = (self.numer(), self.denom());
        let (rn, rd) = (n.sqrt(), d.sqrt());
        (&rn * &rn == *n && &rd * &rd == *d).then(|| BigRational::new(rn, rd))
    }
}

/// Parse `"p/q"`, `"p"` or a decimal literal such as `"0.25"` into a rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let mut value: BigInt = digits.parse().ok()?;
        if negative {
            value = -value;
        }
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        return Some(BigRational::new(value, scale));
    }
    text.parse::<BigInt>().ok().map(BigRational::from_integer)
}

/// Render a rational as `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
