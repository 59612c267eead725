use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::ops::{Abs, EstimatedLog2, SquareRoot};
use dashu_int::{IBig, Sign};

use crate::polyrat::BigRat;

type Inner = FBig<HalfEven, 2>;

pub const MIN_PRECISION: usize = 64;

/// Binary floating-point number with a fixed working precision in bits.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct HighFloat(Inner);

fn to_ibig(n: &num_bigint::BigInt) -> IBig {
    // Both sides use two's-complement little-endian signed bytes.
    IBig::from_le_bytes(&n.to_signed_bytes_le())
}

impl HighFloat {
    pub fn zero(precision: usize) -> Self {
        Self::from_i64(0, precision)
    }

    pub fn from_i64(v: i64, precision: usize) -> Self {
        HighFloat(Inner::from(v).with_precision(precision.max(MIN_PRECISION)).value())
    }

    /// Exact conversion (every finite `f64` is a dyadic rational).
    pub fn from_f64(v: f64, precision: usize) -> Self {
        let x = Inner::try_from(v).expect("finite f64");
        HighFloat(x.with_precision(precision.max(MIN_PRECISION)).value())
    }

    pub fn from_rat(v: &BigRat, precision: usize) -> Self {
        let p = precision.max(MIN_PRECISION);
        let n = Inner::from(to_ibig(v.numer())).with_precision(p).value();
        let d = Inner::from(to_ibig(v.denom())).with_precision(p).value();
        HighFloat(n / d)
    }

    pub fn precision(&self) -> usize {
        self.0.precision()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    pub fn is_zero(&self) -> bool {
        self.0.repr().is_zero()
    }

    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.0.sign() == Sign::Negative {
            -1
        } else {
            1
        }
    }

    pub fn abs(&self) -> Self {
        HighFloat(self.0.clone().abs())
    }

    pub fn sqrt(&self) -> Self {
        HighFloat(self.0.sqrt())
    }

    /// Rough `log2 |x|`; `-inf` for zero.
    pub fn log2(&self) -> f64 {
        self.0.log2_est() as f64
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        HighFloat(&self.0 * Inner::from(k))
    }

    /// Multiplies by `2^k` exactly.
    pub fn mul_pow2(&self, k: isize) -> Self {
        HighFloat(&self.0 * Inner::from_parts(IBig::ONE, k))
    }
}

impl fmt::Debug for HighFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl fmt::Display for HighFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&HighFloat> for &HighFloat {
            type Output = HighFloat;
            fn $m(self, rhs: &HighFloat) -> HighFloat {
                HighFloat((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<HighFloat> for HighFloat {
            type Output = HighFloat;
            fn $m(self, rhs: HighFloat) -> HighFloat {
                HighFloat(self.0.$m(rhs.0))
            }
        }
        impl $tr<&HighFloat> for HighFloat {
            type Output = HighFloat;
            fn $m(self, rhs: &HighFloat) -> HighFloat {
                HighFloat(self.0.$m(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for HighFloat {
    type Output = HighFloat;
    fn neg(self) -> HighFloat {
        HighFloat(-self.0)
    }
}

impl Neg for &HighFloat {
    type Output = HighFloat;
    fn neg(self) -> HighFloat {
        HighFloat(-&self.0)
    }
}
