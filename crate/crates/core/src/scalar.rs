//! Coefficient fields for the group algebras and polynomial rings.
//!
//! Every exact computation in the crate runs over [`BigRational`]; the other
//! implementations exist for callers who want fixed-width rationals or a
//! floating-point shadow of the same formulas.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, NumAssign, ToPrimitive};

/// A commutative field of coefficients with a conjugation.
pub trait Scalar:
    Clone + Debug + PartialEq + Num + NumAssign + Neg<Output = Self> + Send + Sync
{
    fn from_i64(v: i64) -> Self;

    fn from_u64(v: u64) -> Self;

    /// Converts an exact rational, or `None` when it does not fit.
    fn from_rational(q: &BigRational) -> Option<Self>;

    /// Complex conjugation; the identity for every real field here.
    fn conj(&self) -> Self {
        self.clone()
    }

    fn to_f64(&self) -> f64;
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_u64(v: u64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_rational(q: &BigRational) -> Option<Self> {
        Some(q.clone())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

macro_rules! fixed_ratio {
    ($int:ty) => {
        impl Scalar for Ratio<$int> {
            fn from_i64(v: i64) -> Self {
                Ratio::from_integer(<$int>::try_from(v).expect("value out of range"))
            }

            fn from_u64(v: u64) -> Self {
                Ratio::from_integer(<$int>::try_from(v).expect("value out of range"))
            }

            fn from_rational(q: &BigRational) -> Option<Self> {
                let n = q.numer().to_string().parse::<$int>().ok()?;
                let d = q.denom().to_string().parse::<$int>().ok()?;
                Some(Ratio::new(n, d))
            }

            fn to_f64(&self) -> f64 {
                *self.numer() as f64 / *self.denom() as f64
            }
        }
    };
}

fixed_ratio!(i64);
fixed_ratio!(i128);

macro_rules! float {
    ($float:ty) => {
        impl Scalar for $float {
            fn from_i64(v: i64) -> Self {
                v as $float
            }

            fn from_u64(v: u64) -> Self {
                v as $float
            }

            fn from_rational(q: &BigRational) -> Option<Self> {
                ToPrimitive::to_f64(q).map(|x| x as $float)
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }
    };
}

float!(f32);
float!(f64);

/// Integer power of a scalar.
pub fn pow<S: Scalar>(base: &S, exp: u32) -> S {
    let mut acc = S::one();
    for _ in 0..exp {
        acc *= base.clone();
    }
    acc
}

/// Exact rational from a numerator and a positive denominator.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `floor(n * t)` for a nonnegative rational `t`.
pub fn floor_scaled(n: u64, t: &BigRational) -> u64 {
    let prod = t * BigRational::from_integer(BigInt::from(n));
    prod.floor().to_integer().to_u64().unwrap_or(0)
}
