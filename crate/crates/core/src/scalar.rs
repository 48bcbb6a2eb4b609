//! Scalar abstraction shared by every learner.
//!
//! Objectives, slacks and inconsistency scores only need ring operations,
//! division and absolute value, so they are written against [`Scalar`] and
//! work over `f32`, `f64` and exact rationals alike. Iterative solvers need
//! a floating-point type and additionally bound on [`Real`].

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// Field-like scalar with exact comparison.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Converts a double without rounding when the target can represent it
    /// (exact for `f64` and rationals; `f32` rounds to nearest).
    fn from_f64_lossless(value: f64) -> Self;

    /// Nearest `f64` to `self`.
    fn to_f64_lossy(&self) -> f64;

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("every scalar type represents small counts")
    }

    /// `false` for NaN and infinities; always `true` for rationals.
    fn is_finite_value(&self) -> bool {
        true
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

/// Floating-point scalar used by iterative solvers and finite differences.
pub trait Real: Scalar + Float {}

impl Scalar for f64 {
    fn from_f64_lossless(value: f64) -> Self {
        value
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f32 {
    fn from_f64_lossless(value: f64) -> Self {
        value as f32
    }

    fn to_f64_lossy(&self) -> f64 {
        f64::from(*self)
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for BigRational {
    fn from_f64_lossless(value: f64) -> Self {
        BigRational::from_float(value).expect("finite double")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    fn from_count(n: usize) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl Real for f64 {}
impl Real for f32 {}
