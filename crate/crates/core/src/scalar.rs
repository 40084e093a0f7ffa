//! Exact ordered-field scalars.
//!
//! Every algorithm in this crate is written against [`Scalar`], an ordered
//! field with exact arithmetic. Floating point types are deliberately not
//! implementors: simplex pivoting, Fourier–Motzkin and the breakpoint
//! search all compare values for equality.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Num, NumAssign, NumRef, Signed, ToPrimitive};

pub trait Scalar:
    Num + NumRef + NumAssign + Signed + Clone + Ord + Hash + Debug + Display + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self;

    /// `numer / denom`; panics on a zero denominator.
    fn ratio(numer: i64, denom: i64) -> Self;

    fn floor(&self) -> Self;

    fn ceil(&self) -> Self;

    fn is_integer(&self) -> bool;

    /// The value as an `i64` when it is an integer that fits.
    fn as_integer_i64(&self) -> Option<i64>;

    /// Lossy conversion, only for display purposes.
    fn to_f64(&self) -> f64;

    /// Numerator and (positive) denominator in lowest terms.
    fn to_big_ratio(&self) -> (BigInt, BigInt);

    fn half() -> Self {
        Self::ratio(1, 2)
    }
}

macro_rules! impl_scalar_for_ratio {
    ($($int:ty),*) => {$(
        impl Scalar for Ratio<$int> {
            fn from_i64(v: i64) -> Self {
                Ratio::from_integer(<$int>::from(v))
            }

            fn ratio(numer: i64, denom: i64) -> Self {
                Ratio::new(<$int>::from(numer), <$int>::from(denom))
            }

            fn floor(&self) -> Self {
                Ratio::floor(self)
            }

            fn ceil(&self) -> Self {
                Ratio::ceil(self)
            }

            fn is_integer(&self) -> bool {
                Ratio::is_integer(self)
            }

            fn as_integer_i64(&self) -> Option<i64> {
                if Ratio::is_integer(self) {
                    self.numer().to_i64()
                } else {
                    None
                }
            }

            fn to_f64(&self) -> f64 {
                ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
            }

            fn to_big_ratio(&self) -> (BigInt, BigInt) {
                (BigInt::from(self.numer().clone()), BigInt::from(self.denom().clone()))
            }
        }
    )*};
}

impl_scalar_for_ratio!(i64, i128, BigInt);

/// Sum of a sequence of scalars.
pub fn sum<'a, T: Scalar, I: IntoIterator<Item = &'a T>>(items: I) -> T {
    items.into_iter().fold(T::zero(), |acc, x| acc + x)
}

/// Dot product of two equal-length slices.
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y)
}

/// Dot product against an integer vector.
pub fn dot_int<T: Scalar>(a: &[T], b: &[i64]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(T::zero(), |acc, (x, &y)| {
        if y == 0 {
            acc
        } else {
            acc + x.clone() * T::from_i64(y)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::{BigRational, Rational64};

    #[test]
    fn ratio_construction_reduces() {
        let r = <Rational64 as Scalar>::ratio(6, -4);
        assert_eq!(r, Rational64::new(-3, 2));
        assert_eq!(Scalar::floor(&r), Rational64::from_integer(-2));
        assert_eq!(Scalar::ceil(&r), Rational64::from_integer(-1));
        assert!(!Scalar::is_integer(&r));
    }

    #[test]
    fn big_ratio_round_trip() {
        let r = <BigRational as Scalar>::ratio(-7, 3);
        let (n, d) = r.to_big_ratio();
        assert_eq!(n, BigInt::from(-7));
        assert_eq!(d, BigInt::from(3));
        assert_eq!(<BigRational as Scalar>::from_i64(5).as_integer_i64(), Some(5));
        assert_eq!(r.as_integer_i64(), None);
    }

    #[test]
    fn dot_products() {
        let a: Vec<Rational64> = vec![Scalar::ratio(1, 2), Scalar::from_i64(3)];
        let b: Vec<Rational64> = vec![Scalar::from_i64(4), Scalar::ratio(1, 3)];
        assert_eq!(dot(&a, &b), Rational64::from_integer(3));
        assert_eq!(dot_int(&a, &[2, -1]), Rational64::from_integer(-2));
    }
}
