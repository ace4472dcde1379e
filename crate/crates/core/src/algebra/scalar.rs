use core::cmp::Ordering;
use core::fmt::{Debug, Display};
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact big rational. Always reduced with a positive denominator.
pub type Rational = BigRational;

/// An exact commutative field of coefficients.
///
/// Implemented by [`Rational`] (numeric mode) and [`RatFun`](super::RatFun)
/// (symbolic mode). All recursions in the crate are generic over this trait so that
/// both modes share one code path.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Sign of the value when it is a number, `None` when it is symbolic.
    fn sign(&self) -> Option<Ordering>;

    /// The value as a rational number, when it is one.
    fn as_rational(&self) -> Option<Rational>;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn from_frac(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn try_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|inv| self.clone() * inv)
    }

    /// `Some(true)` if known to be ≥ 0, `Some(false)` if known negative.
    fn is_nonnegative(&self) -> Option<bool> {
        self.sign().map(|s| s != Ordering::Less)
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn sign(&self) -> Option<Ordering> {
        Some(if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        })
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

/// Shorthand for building rationals in code and tests.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use proptest::prelude::*;

    fn arb_rat() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| rat(n, d))
    }

    #[test]
    fn rationals_are_reduced() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(format!("{r}"), "-3/2");
        assert_eq!(format!("{}", int(7)), "7");
    }

    #[test]
    fn inverse_of_zero_is_none() {
        assert!(Rational::zero().inv().is_none());
        assert_eq!(rat(2, 3).inv(), Some(rat(3, 2)));
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_rat(), b in arb_rat(), c in arb_rat()) {
            prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
            if !a.is_zero() {
                prop_assert_eq!(a.clone() * Scalar::inv(&a).unwrap(), Rational::one());
            }
        }
    }
}
