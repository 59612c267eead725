use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::poly::{poly_gcd, RatPoly};
use super::rational::BigRat;
use super::PolyError;

/// Reduced rational function `num / den` with a monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: RatPoly,
    den: RatPoly,
}

impl RatFunc {
    pub fn new(num: RatPoly, den: RatPoly) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::from_poly(RatPoly::zero()));
        }
        let g = poly_gcd(&num, &den)?;
        let num = num.exact_div(&g).expect("gcd divides numerator");
        let den = den.exact_div(&g).expect("gcd divides denominator");
        let lead = den.leading().expect("nonzero").recip();
        Ok(RatFunc {
            num: num.scale(&lead),
            den: den.scale(&lead),
        })
    }

    pub fn from_poly(p: RatPoly) -> Self {
        RatFunc {
            num: p,
            den: RatPoly::one(),
        }
    }

    pub fn constant(c: BigRat) -> Self {
        Self::from_poly(RatPoly::constant(c))
    }

    /// `p'/p`.
    pub fn log_derivative(p: &RatPoly) -> Result<Self, PolyError> {
        Self::new(p.derivative(), p.clone())
    }

    pub fn num(&self) -> &RatPoly {
        &self.num
    }

    pub fn den(&self) -> &RatPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value when the denominator is 1.
    pub fn as_poly(&self) -> Option<&RatPoly> {
        self.den.is_constant().then_some(&self.num)
    }

    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(num, &self.den * &self.den).expect("nonzero denominator")
    }

    pub fn recip(&self) -> Result<Self, PolyError> {
        Self::new(self.den.clone(), self.num.clone())
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num.to_expr(), self.den.to_expr())
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;

    fn add(self, rhs: &RatFunc) -> RatFunc {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;

    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;

    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;

    /// Panics on division by the zero function.
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self * &rhs.recip().expect("division by zero rational function")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;

    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyrat::rational::int;

    #[test]
    fn double_root_log_derivative() {
        // P = a (z - q)^2 with q = 5: P'/P = 2/(z - q)
        let p = RatPoly::linear_root(&int(5)).pow(2).scale(&int(3));
        let ld = RatFunc::log_derivative(&p).unwrap();
        assert_eq!(ld.num(), &RatPoly::constant(int(2)));
        assert_eq!(ld.den(), &RatPoly::linear_root(&int(5)));
    }

    #[test]
    fn arithmetic_reduces() {
        let a = RatFunc::new(RatPoly::one(), RatPoly::linear_root(&int(1))).unwrap();
        let b = RatFunc::new(RatPoly::one(), RatPoly::linear_root(&int(-1))).unwrap();
        // 1/(z-1) - 1/(z+1) = 2/(z^2-1)
        let d = &a - &b;
        assert_eq!(d.num(), &RatPoly::constant(int(2)));
        assert_eq!(d.den(), &RatPoly::from_ints(&[-1, 0, 1]));
        let prod = &(&d * &RatFunc::from_poly(RatPoly::from_ints(&[-1, 0, 1]))) / &RatFunc::constant(int(2));
        assert_eq!(prod.as_poly(), Some(&RatPoly::one()));
        assert!(RatFunc::new(RatPoly::one(), RatPoly::zero()).is_err());
    }

    #[test]
    fn quotient_rule() {
        let f = RatFunc::new(RatPoly::z(), RatPoly::linear_root(&int(2))).unwrap();
        // d/dz z/(z-2) = -2/(z-2)^2
        let df = f.derivative();
        assert_eq!(df.num(), &RatPoly::constant(int(-2)));
        assert_eq!(df.den(), &RatPoly::linear_root(&int(2)).pow(2));
    }
}
