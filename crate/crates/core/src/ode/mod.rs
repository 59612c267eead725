//! Linear ODE data model: `Σ_k P_k(z) w^{(n−k)}(z) = 0` with polynomial `P_k`.

mod fuchs;
mod moebius;
mod riemann;
mod singular;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::polyrat::rational::common_denominator;
use crate::polyrat::{parse_rat, poly_gcd, BigRat, PolyError, RatPoly};

pub use fuchs::{fuchs_check, FuchsReport, PointExponentSum};
pub use moebius::{moebius_transform, Moebius};
pub use riemann::{riemann_symbol, RiemannColumn, RiemannSymbol};
pub use singular::{singular_points, SingularKind, SingularPoint, SingularPoints};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OdeError {
    #[error("an ODE needs at least two coefficients, got {0}")]
    NotAnODE(usize),
    #[error("the leading coefficient P_0 is identically zero")]
    DegenerateLeading,
    #[error("Moebius map is singular (ad - bc = 0)")]
    SingularMoebius,
    #[error("equation is not Fuchsian: irregular singular point at {0}")]
    NotFuchsian(Point),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl OdeError {
    pub fn code(&self) -> &'static str {
        match self {
            OdeError::NotAnODE(_) => "NotAnODE",
            OdeError::DegenerateLeading => "DegenerateLeading",
            OdeError::SingularMoebius => "SingularMoebius",
            OdeError::NotFuchsian(_) => "NotFuchsian",
            OdeError::Poly(e) => e.code(),
        }
    }
}

/// A point of the Riemann sphere.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Finite(BigRat),
    Infinity,
}

impl Point {
    pub fn finite(&self) -> Option<&BigRat> {
        match self {
            Point::Finite(x) => Some(x),
            Point::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
}

impl From<BigRat> for Point {
    fn from(x: BigRat) -> Self {
        Point::Finite(x)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(x) => write!(f, "{x}"),
            Point::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Point {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "infinity" | "Infinity" | "∞" => Ok(Point::Infinity),
            other => parse_rat(other).map(Point::Finite),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `Σ_k P_k w^{(n−k)} = 0` in canonical form.
///
/// Canonical form: the coefficients share no polynomial factor, are integer
/// polynomials with coprime content, and `P_0` has a positive leading
/// coefficient. Two equations with the same solutions up to an overall
/// polynomial multiplier therefore compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearOde {
    coeffs: Vec<RatPoly>,
}

impl LinearOde {
    pub fn new(coeffs: Vec<RatPoly>) -> Result<Self, OdeError> {
        make_ode(coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[RatPoly] {
        &self.coeffs
    }

    /// `P_k`, the coefficient of `w^{(n−k)}`.
    pub fn coeff(&self, k: usize) -> &RatPoly {
        &self.coeffs[k]
    }

    pub fn leading(&self) -> &RatPoly {
        &self.coeffs[0]
    }

    /// `P_n`, the coefficient of `w` itself.
    pub fn last(&self) -> &RatPoly {
        self.coeffs.last().expect("at least two coefficients")
    }

    /// Whether `P_0` has the largest degree among all coefficients and that
    /// degree exceeds the order. Confluent equations fail this.
    pub fn follows_degree_convention(&self) -> bool {
        let d0 = self.leading().degree_or_neg();
        d0 > self.order() as i64 && self.coeffs.iter().all(|p| p.degree_or_neg() <= d0)
    }

    /// Applies the operator to a polynomial: `Σ P_k f^{(n−k)}`.
    pub fn apply(&self, f: &RatPoly) -> RatPoly {
        let n = self.order();
        let mut derivs = vec![f.clone()];
        for _ in 0..n {
            let next = derivs.last().unwrap().derivative();
            derivs.push(next);
        }
        self.coeffs
            .iter()
            .enumerate()
            .fold(RatPoly::zero(), |acc, (k, p)| &acc + &(p * &derivs[n - k]))
    }
}

impl fmt::Debug for LinearOde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|p| format!("({})", p.to_expr())).collect();
        write!(f, "LinearOde[{}]", parts.join(", "))
    }
}

impl fmt::Display for LinearOde {
    /// Human form such as `(z^2 - z) w'' + (...) w' + (...) w = 0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.order();
        let mut first = true;
        for (k, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let m = n - k;
            let d = match m {
                0 => "w".to_string(),
                1..=3 => format!("w{}", "'".repeat(m)),
                _ => format!("w^({m})"),
            };
            write!(f, "({}) {}", p.to_expr(), d)?;
        }
        write!(f, " = 0")
    }
}

#[derive(Serialize, Deserialize)]
struct OdeRepr {
    coeffs: Vec<RatPoly>,
}

impl Serialize for LinearOde {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        OdeRepr {
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearOde {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = OdeRepr::deserialize(d)?;
        make_ode(repr.coeffs).map_err(serde::de::Error::custom)
    }
}

/// Validates and canonicalizes `[P_0, …, P_n]`.
pub fn make_ode(coeffs: Vec<RatPoly>) -> Result<LinearOde, OdeError> {
    if coeffs.len() < 2 {
        return Err(OdeError::NotAnODE(coeffs.len()));
    }
    if coeffs[0].is_zero() {
        return Err(OdeError::DegenerateLeading);
    }
    Ok(LinearOde {
        coeffs: canonicalize(coeffs)?,
    })
}

fn canonicalize(coeffs: Vec<RatPoly>) -> Result<Vec<RatPoly>, OdeError> {
    let mut g = coeffs[0].clone();
    for p in &coeffs[1..] {
        if !p.is_zero() {
            g = poly_gcd(&g, p)?;
        }
    }
    let g = g.monic();
    let reduced: Vec<RatPoly> = coeffs
        .iter()
        .map(|p| p.exact_div(&g).expect("gcd divides every coefficient"))
        .collect();

    let den = common_denominator(reduced.iter().flat_map(|p| p.coeffs()));
    let mut content = reduced
        .iter()
        .flat_map(|p| p.coeffs())
        .map(|c| (c * BigRat::from_integer(den.clone())).to_integer())
        .fold(BigInt::zero(), |acc, v| acc.gcd(&v));
    if reduced[0].leading().expect("nonzero P_0").is_negative() {
        content = -content;
    }
    let scale = BigRat::new(den, content);
    if scale.is_one() {
        return Ok(reduced);
    }
    Ok(reduced.iter().map(|p| p.scale(&scale)).collect())
}

/// Multiplicity of `x` as a root of `p` (`0` if not a root, `None` for `p = 0`).
pub fn order_at(p: &RatPoly, x: &BigRat) -> Option<usize> {
    if x.is_zero() {
        p.order_at_zero()
    } else {
        p.taylor_shift(x).order_at_zero()
    }
}
