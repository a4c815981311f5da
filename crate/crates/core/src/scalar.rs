//! Scalar abstractions.
//!
//! Exact arithmetic is generic over [`ExactScalar`] (arbitrary-precision or
//! machine-word rationals); floating point code is generic over [`Real`]
//! (`f32` or `f64`).

use std::fmt::Debug;
use std::ops::Neg;

use nalgebra::RealField;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, Num, ToPrimitive};

use crate::primes::Modulus;

/// A field of exact rationals used for cyclotomic coefficients.
pub trait ExactScalar:
    Clone + Debug + PartialEq + Num + Neg<Output = Self> + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Image of the value in `Z/qZ`, `None` if `q` divides the denominator.
    fn residue(&self, q: &Modulus) -> Option<u64>;
}

fn reduce_bigint(x: &BigInt, q: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(q));
    r.to_u64().expect("residue fits in u64")
}

impl ExactScalar for BigRational {
    fn residue(&self, q: &Modulus) -> Option<u64> {
        let num = reduce_bigint(self.numer(), q.value());
        let den = reduce_bigint(self.denom(), q.value());
        q.inv(den).map(|d| q.mul(num, d))
    }
}

impl ExactScalar for Rational64 {
    fn residue(&self, q: &Modulus) -> Option<u64> {
        let m = q.value() as i128;
        let num = (*self.numer() as i128).rem_euclid(m) as u64;
        let den = (*self.denom() as i128).rem_euclid(m) as u64;
        q.inv(den).map(|d| q.mul(num, d))
    }
}

/// Floating point scalar for the numeric certification path.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive + Send + Sync {}

impl Real for f32 {}
impl Real for f64 {}

pub(crate) fn real<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("f64 converts to the scalar type")
}

pub(crate) fn to_f64<R: Real>(x: R) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"a"`, `"a/b"` (and surrounding whitespace) into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let r: BigRational = s.trim().parse().ok()?;
    Some(r)
}

