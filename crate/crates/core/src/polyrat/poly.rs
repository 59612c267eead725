use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{common_denominator, format_rat, int, parse_rat, BigRat};
use super::PolyError;

/// Dense univariate polynomial over the rationals, ascending degree.
///
/// The highest stored coefficient is never zero; the zero polynomial has no
/// coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRat>,
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRat::one())
    }

    pub fn constant(c: BigRat) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Self::new(vec![BigRat::zero(), BigRat::one()])
    }

    /// `c·z^k`
    pub fn monomial(c: BigRat, k: usize) -> Self {
        let mut coeffs = vec![BigRat::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// The monic linear factor `z − r`.
    pub fn linear_root(r: &BigRat) -> Self {
        Self::new(vec![-r.clone(), BigRat::one()])
    }

    /// `∏ (z − r)` over the given roots.
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a BigRat>) -> Self {
        roots
            .into_iter()
            .fold(Self::one(), |acc, r| &acc * &Self::linear_root(r))
    }

    pub fn new(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigRat> {
        self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> BigRat {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the convention `deg 0 = -1`, handy for bound arithmetic.
    pub fn degree_or_neg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> Option<&BigRat> {
        self.coeffs.last()
    }

    /// Multiplicity of the root `z = 0`; `None` for the zero polynomial.
    pub fn order_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRat::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRat::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `p(z) ↦ p(z + a)`, the expansion of `p` about `a`.
    pub fn taylor_shift(&self, a: &BigRat) -> Self {
        // Horner in the shifted variable.
        let shift = Self::new(vec![a.clone(), BigRat::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * &shift) + &Self::constant(c.clone()))
    }

    /// Composition `self(inner(z))`.
    pub fn compose(&self, inner: &RatPoly) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
    }

    pub fn div_rem(&self, divisor: &RatPoly) -> Result<(RatPoly, RatPoly), PolyError> {
        let lead = divisor.leading().ok_or(PolyError::DivisionByZero)?;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() < divisor.coeffs.len() {
            return Ok((Self::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / lead;
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Quotient when `divisor` divides `self` exactly.
    pub fn exact_div(&self, divisor: &RatPoly) -> Option<RatPoly> {
        match self.div_rem(divisor) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn divides(&self, other: &RatPoly) -> bool {
        other.exact_div(self).is_some()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    /// Splits off the rational content: returns `(c, p)` with `self = c·p`, `p`
    /// having coprime integer coefficients and a positive leading coefficient.
    pub fn primitive_part(&self) -> (BigRat, RatPoly) {
        if self.is_zero() {
            return (BigRat::one(), Self::zero());
        }
        let den = common_denominator(&self.coeffs);
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRat::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        if ints.last().is_some_and(Signed::is_negative) {
            g = -g;
        }
        let content = BigRat::new(g.clone(), den);
        let prim = Self::new(
            ints.into_iter()
                .map(|v| BigRat::from_integer(v / &g))
                .collect(),
        );
        (content, prim)
    }

    /// Pretty form in `z`, e.g. `z^3 - 2*z + 1/2`.
    pub fn to_expr(&self) -> String {
        self.to_expr_in("z")
    }

    pub fn to_expr_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if k == 0 {
                out.push_str(&format_rat(&mag));
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", format_rat(&mag), mono));
            }
        }
        out
    }
}

/// Monic greatest common divisor by the Euclidean algorithm.
pub fn poly_gcd(a: &RatPoly, b: &RatPoly) -> Result<RatPoly, PolyError> {
    if a.is_zero() && b.is_zero() {
        return Err(PolyError::BothZero);
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = x.div_rem(&y)?;
        // Keeping the remainders monic stops coefficient blow-up.
        x = y;
        y = r.monic();
    }
    Ok(x.monic())
}

/// `(g, s, t)` with `s·a + t·b = g = gcd(a, b)`, `g` monic.
pub fn poly_xgcd(a: &RatPoly, b: &RatPoly) -> Result<(RatPoly, RatPoly, RatPoly), PolyError> {
    if a.is_zero() && b.is_zero() {
        return Err(PolyError::BothZero);
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (RatPoly::one(), RatPoly::zero());
    let (mut t0, mut t1) = (RatPoly::zero(), RatPoly::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1)?;
        let s = &s0 - &(&q * &s1);
        let t = &t0 - &(&q * &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = r0.leading().expect("nonzero gcd").recip();
    Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
}

/// Monic squarefree part `p / gcd(p, p')`: the same distinct roots, each simple.
pub fn radical(p: &RatPoly) -> Result<RatPoly, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let g = poly_gcd(p, &p.derivative())?;
    Ok(p.exact_div(&g).expect("gcd divides p").monic())
}

/// Yun's squarefree factorization: `p = c · ∏ f_i^i` with each `f_i` monic,
/// squarefree and pairwise coprime. Constant factors are omitted.
pub fn squarefree_decomposition(p: &RatPoly) -> Result<Vec<(RatPoly, usize)>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut out = Vec::new();
    if p.is_constant() {
        return Ok(out);
    }
    let dp = p.derivative();
    let a0 = poly_gcd(p, &dp)?;
    let mut b = p.exact_div(&a0).expect("gcd divides p");
    let mut c = dp.exact_div(&a0).expect("gcd divides p'");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = poly_gcd(&b, &d)?;
        if !a.is_constant() {
            out.push((a.monic(), i));
        }
        b = b.exact_div(&a).expect("gcd divides b");
        c = d.exact_div(&a).expect("gcd divides d");
        d = &c - &b.derivative();
        i += 1;
    }
    Ok(out)
}

impl fmt::Display for RatPoly {
    /// Canonical text form: ascending coefficient list, e.g. `[0, -1, 0, 1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rat(c))?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({})", self.to_expr())
    }
}

impl FromStr for RatPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| PolyError::Parse(s.to_string()))?;
        if body.trim().is_empty() {
            return Ok(Self::zero());
        }
        body.split(',')
            .map(parse_rat)
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }
}

impl Serialize for RatPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        super::rational::serde_rat_vec::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for RatPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        super::rational::serde_rat_vec::deserialize(d).map(Self::new)
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;

    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;

    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;

    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;

    fn neg(self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: RatPoly) -> RatPoly { (&self).$m(&rhs) }
        }
        impl $tr<&RatPoly> for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: &RatPoly) -> RatPoly { (&self).$m(rhs) }
        }
        impl $tr<RatPoly> for &RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: RatPoly) -> RatPoly { self.$m(&rhs) }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for RatPoly {
    type Output = RatPoly;

    fn neg(self) -> RatPoly {
        -&self
    }
}
