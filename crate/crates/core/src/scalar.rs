//! The scalar abstraction shared by every numeric routine in this crate.
//!
//! All formulas here are ring/field expressions over an ordered scalar, so
//! they are written once against [`Scalar`] and instantiated at whatever
//! number type the caller needs. The canonical instantiation is [`Rat`]
//! (arbitrary-precision rationals): equality-based results such as forced
//! generating-tree weights, exact optima, and the clique closed forms are
//! only meaningful when arithmetic is exact. `f64` is also supported for
//! quick approximate evaluation of the same formulas.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Num;

/// Exact rational scalar used by the CLI, the oracle, and all tests.
pub type Rat = num_rational::BigRational;

/// Number type the core algorithms are generic over.
///
/// `Num` supplies ring and field operations plus `zero`/`one`; the extra
/// constructors inject counts and small literal fractions (for example the
/// `21/4` coefficients of the step-sum case polynomials) without routing
/// through floating point.
pub trait Scalar: Num + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Embed a cardinality (cluster size, tree size, index) into the scalar.
    fn from_count(n: usize) -> Self;

    /// Embed the fraction `num/den`. `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;
}

impl Scalar for Rat {
    fn from_count(n: usize) -> Self {
        Rat::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat::new(BigInt::from(num), BigInt::from(den))
    }
}

impl Scalar for f64 {
    fn from_count(n: usize) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn rat_display_and_ops() {
        let half = Rat::from_ratio(1, 2);
        let three = Rat::from_count(3);
        assert_eq!((half.clone() + half.clone()), Rat::from_count(1));
        assert_eq!(format!("{}", Rat::from_ratio(3, 2)), "3/2");
        assert_eq!(format!("{}", three), "3");
        assert!(Rat::from_ratio(-9, 1) < Rat::zero());
    }
}
