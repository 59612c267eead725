//! Exact univariate polynomial and rational-function arithmetic over
//! arbitrary-precision rationals.

mod poly;
mod ratfunc;
pub mod rational;
mod roots;

pub use poly::{poly_gcd, poly_xgcd, radical, squarefree_decomposition, RatPoly};
pub use ratfunc::RatFunc;
pub use rational::{format_rat, int, parse_rat, rat, BigRat};
pub use roots::{rational_roots, RationalRoots, RootEntry};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("cannot parse {0:?} as a rational or polynomial")]
    Parse(String),
}

impl PolyError {
    pub fn code(&self) -> &'static str {
        match self {
            PolyError::BothZero => "BothZero",
            PolyError::ZeroPolynomial => "ZeroPolynomial",
            PolyError::DivisionByZero => "DivisionByZero",
            PolyError::Parse(_) => "ParseError",
        }
    }
}

/// Derivative `dp/dz`.
pub fn poly_derivative(p: &RatPoly) -> RatPoly {
    p.derivative()
}
