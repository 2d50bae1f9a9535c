//! Coefficient field for cyclotomic numbers.
//!
//! Exact rationals give exact verdicts; the float impls exist for quick
//! numerical cross-checks and use a fixed tolerance for zero and integer tests.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed, ToPrimitive, Zero};

pub trait Scalar: Num + Neg<Output = Self> + Clone + Debug + Send + Sync + 'static {
    /// Whether zero and integer tests are exact.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// Zero test: exact for rationals, tolerance-based for floats.
    fn is_negligible(&self) -> bool;

    /// The value as an integer, if it is one.
    fn integer_value(&self) -> Option<i64>;

    /// `p/q` form for rationals, decimal for floats.
    fn render(&self) -> String;
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn integer_value(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    fn render(&self) -> String {
        render_ratio(self)
    }
}

impl Scalar for Ratio<i64> {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn integer_value(&self) -> Option<i64> {
        self.is_integer().then(|| *self.numer())
    }

    fn render(&self) -> String {
        render_ratio(self)
    }
}

fn render_ratio<I>(r: &Ratio<I>) -> String
where
    I: Clone + num_integer::Integer + Signed + std::fmt::Display,
{
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_ratio(num: i64, den: i64) -> Self {
                num as $t / den as $t
            }

            fn is_negligible(&self) -> bool {
                self.abs() < $tol
            }

            fn integer_value(&self) -> Option<i64> {
                let r = self.round();
                ((self - r).abs() < $tol).then(|| r as i64)
            }

            fn render(&self) -> String {
                format!("{}", self)
            }
        }
    };
}

float_scalar!(f64, 1e-8);
float_scalar!(f32, 1e-3);
