//! Constructors for the Heun-class equation families.

mod registry;

pub use registry::{EquationFamily, FamilyRegistry};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::frobenius::classify_point;
use crate::ode::{make_ode, LinearOde, OdeError, Point, SingularKind};
use crate::polyrat::rational::{serde_rat, serde_rat_vec};
use crate::polyrat::{BigRat, RatFunc, RatPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeunError {
    #[error("Fuchsian identity violated: sum of thetas + theta_inf + alpha = {observed}, expected {expected}")]
    FuchsianIdentity { observed: BigRat, expected: BigRat },
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    #[error("not of confluent Heun class: {0}")]
    NotConfluentClass(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unknown equation family {0:?}")]
    UnknownFamily(String),
    #[error(transparent)]
    Ode(#[from] OdeError),
}

impl HeunError {
    pub fn code(&self) -> &'static str {
        match self {
            HeunError::FuchsianIdentity { .. } => "FuchsianIdentity",
            HeunError::DegenerateGeometry(_) => "DegenerateGeometry",
            HeunError::NotConfluentClass(_) => "NotConfluentClass",
            HeunError::InvalidParams(_) => "InvalidParams",
            HeunError::UnknownFamily(_) => "UnknownFamily",
            HeunError::Ode(e) => e.code(),
        }
    }
}

/// General Heun equation with singular points `0, 1, t, ∞`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeunParams {
    #[serde(with = "serde_rat")]
    pub t: BigRat,
    #[serde(with = "serde_rat")]
    pub theta1: BigRat,
    #[serde(with = "serde_rat")]
    pub theta2: BigRat,
    #[serde(with = "serde_rat")]
    pub theta3: BigRat,
    #[serde(with = "serde_rat")]
    pub theta_inf: BigRat,
    #[serde(with = "serde_rat")]
    pub alpha: BigRat,
    #[serde(with = "serde_rat")]
    pub q: BigRat,
}

/// Second-order equation with `m` finite Fuchsian points and `m − 2` accessory zeros.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiHeunParams {
    #[serde(with = "serde_rat_vec")]
    pub z: Vec<BigRat>,
    #[serde(with = "serde_rat_vec")]
    pub theta: Vec<BigRat>,
    #[serde(with = "serde_rat")]
    pub theta_inf: BigRat,
    #[serde(with = "serde_rat")]
    pub alpha: BigRat,
    #[serde(with = "serde_rat_vec")]
    pub q: Vec<BigRat>,
}

impl MultiHeunParams {
    pub fn m(&self) -> usize {
        self.z.len()
    }
}

/// The third-order Fuchsian example with exponents `{0, α, β}` at 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThirdOrderParams {
    #[serde(with = "serde_rat")]
    pub t: BigRat,
    #[serde(with = "serde_rat")]
    pub alpha: BigRat,
    #[serde(with = "serde_rat")]
    pub beta: BigRat,
    #[serde(with = "serde_rat")]
    pub theta2: BigRat,
    #[serde(with = "serde_rat")]
    pub theta3: BigRat,
    #[serde(with = "serde_rat")]
    pub kappa: BigRat,
    #[serde(with = "serde_rat")]
    pub q: BigRat,
}

/// Confluent Heun-class equation `P_0 w'' + P_1 w' + α(z − q) w = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfluentHeunParams {
    pub p0: RatPoly,
    pub p1: RatPoly,
    #[serde(with = "serde_rat")]
    pub alpha: BigRat,
    #[serde(with = "serde_rat")]
    pub q: BigRat,
}

fn small(n: usize) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

fn distinct(points: &[BigRat]) -> Result<(), HeunError> {
    for (i, a) in points.iter().enumerate() {
        if points[..i].contains(a) {
            return Err(HeunError::DegenerateGeometry(format!("singular point {a} repeated")));
        }
    }
    Ok(())
}

/// `P_0 = ∏(z − z_k)`, `P_1 = Σ (1 − θ_k) P_0/(z − z_k)`.
fn fuchsian_leading_pair(z: &[BigRat], theta: &[BigRat]) -> (RatPoly, RatPoly) {
    let p0 = RatPoly::from_roots(z);
    let p1 = z.iter().zip(theta).fold(RatPoly::zero(), |acc, (zk, th)| {
        let cof = p0.exact_div(&RatPoly::linear_root(zk)).expect("z_k is a root");
        &acc + &cof.scale(&(BigRat::one() - th))
    });
    (p0, p1)
}

pub fn general_heun(p: &HeunParams) -> Result<LinearOde, HeunError> {
    multi_heun(&MultiHeunParams {
        z: vec![BigRat::zero(), BigRat::one(), p.t.clone()],
        theta: vec![p.theta1.clone(), p.theta2.clone(), p.theta3.clone()],
        theta_inf: p.theta_inf.clone(),
        alpha: p.alpha.clone(),
        q: vec![p.q.clone()],
    })
}

pub fn multi_heun(p: &MultiHeunParams) -> Result<LinearOde, HeunError> {
    let m = p.m();
    if m < 3 {
        return Err(HeunError::InvalidParams(format!("need m >= 3 finite points, got {m}")));
    }
    if p.theta.len() != m {
        return Err(HeunError::InvalidParams(format!("expected {m} thetas, got {}", p.theta.len())));
    }
    if p.q.len() != m - 2 {
        return Err(HeunError::InvalidParams(format!("expected {} q values, got {}", m - 2, p.q.len())));
    }
    distinct(&p.z)?;
    let observed = p.theta.iter().fold(BigRat::zero(), |acc, t| acc + t) + &p.theta_inf + &p.alpha;
    let expected = small(m - 1);
    if observed != expected {
        return Err(HeunError::FuchsianIdentity { observed, expected });
    }
    let (p0, p1) = fuchsian_leading_pair(&p.z, &p.theta);
    let p2 = RatPoly::from_roots(&p.q).scale(&(&p.alpha * &p.theta_inf));
    Ok(make_ode(vec![p0, p1, p2])?)
}

fn check_t(t: &BigRat) -> Result<(), HeunError> {
    if t.is_zero() || t.is_one() {
        return Err(HeunError::DegenerateGeometry(format!("t = {t} collides with 0 or 1")));
    }
    Ok(())
}

/// `z²(z−1)(z−t) w''' + [(3−α−β) z(z−1)(z−t) − θ_2 z²(z−t) − θ_3 z²(z−1)] w''
///  + (α−1)(β−1)(z−1)(z−t) w' + κ(z−q) w = 0`
pub fn third_order_example(p: &ThirdOrderParams) -> Result<LinearOde, HeunError> {
    check_t(&p.t)?;
    let one = BigRat::one();
    let z = RatPoly::z();
    let zm1 = RatPoly::linear_root(&one);
    let zmt = RatPoly::linear_root(&p.t);
    let z2 = z.pow(2);
    let p0 = &(&z2 * &zm1) * &zmt;
    let p1 = &(&(&(&z * &zm1) * &zmt).scale(&(small(3) - &p.alpha - &p.beta))
        - &(&z2 * &zmt).scale(&p.theta2))
        - &(&z2 * &zm1).scale(&p.theta3);
    let p2 = (&zm1 * &zmt).scale(&((&p.alpha - &one) * (&p.beta - &one)));
    let p3 = RatPoly::linear_root(&p.q).scale(&p.kappa);
    Ok(make_ode(vec![p0, p1, p2, p3])?)
}

/// The hand-derived deformed third-order equation `u''' + Δ_1 u'' + Δ_2 u' + Δ_3 u = 0`
/// with the partial-fraction coefficients written out term by term, cleared by
/// `z²(z−1)(z−t)(z−q)`.
pub fn third_order_deformed(p: &ThirdOrderParams) -> Result<LinearOde, HeunError> {
    check_t(&p.t)?;
    if p.q.is_zero() || p.q.is_one() || p.q == p.t {
        return Err(HeunError::DegenerateGeometry(format!("q = {} is a singular point", p.q)));
    }
    let one = BigRat::one();
    let c = |v: BigRat| RatFunc::constant(v);
    let inv = |r: &BigRat| RatFunc::new(RatPoly::one(), RatPoly::linear_root(r)).expect("nonzero");
    let (a, b, t2, t3, k) = (&p.alpha, &p.beta, &p.theta2, &p.theta3, &p.kappa);
    let over_z = inv(&BigRat::zero());
    let over_z1 = inv(&one);
    let over_zt = inv(&p.t);
    let over_zq = inv(&p.q);
    let over_z2 = &over_z * &over_z;

    let sigma = &(&over_z1 + &over_zt) - &over_zq;
    let d1 = &(&(&(&c(small(5) - a - b) * &over_z) - &(&c(t2 - &one) * &over_z1))
        - &(&c(t3 - &one) * &over_zt))
        - &over_zq;
    let d2_terms = [
        &c((small(2) - a) * (small(2) - b)) * &over_z2,
        &(&c(small(3) - a - b) * &over_z) * &sigma,
        -&(&c(small(2) * t2) * &(&over_z * &over_z1)),
        -&(&c(small(2) * t3) * &(&over_z * &over_zt)),
        -&(&c(t2 + t3) * &(&over_z1 * &over_zt)),
        &c(t2.clone()) * &(&over_zq * &over_z1),
        &c(t3.clone()) * &(&over_zq * &over_zt),
    ];
    let d2 = d2_terms.iter().fold(RatFunc::constant(BigRat::zero()), |acc, t| &acc + t);
    let kappa_term = &(&c(k.clone()) * &RatFunc::from_poly(RatPoly::linear_root(&p.q)))
        * &(&(&over_z2 * &over_z1) * &over_zt);
    let d3 = &(&(&c((&one - a) * (&one - b)) * &over_z2) * &sigma) + &kappa_term;

    let clear = RatFunc::from_poly(
        &(&(&RatPoly::z().pow(2) * &RatPoly::linear_root(&one)) * &RatPoly::linear_root(&p.t))
            * &RatPoly::linear_root(&p.q),
    );
    let coeffs = [RatFunc::constant(one.clone()), d1, d2, d3]
        .iter()
        .map(|f| {
            (&clear * f)
                .as_poly()
                .cloned()
                .ok_or_else(|| HeunError::InvalidParams("clearing factor does not clear".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(make_ode(coeffs)?)
}

/// Checks the confluent degree pattern and that an irregular point exists.
pub fn confluent_from_polys(p0: RatPoly, p1: RatPoly, p2: RatPoly) -> Result<LinearOde, HeunError> {
    let d0 = p0.degree_or_neg();
    if !(0..=2).contains(&d0) {
        return Err(HeunError::NotConfluentClass(format!("deg P_0 = {d0}, expected at most 2")));
    }
    if p1.degree() != Some(2) {
        return Err(HeunError::NotConfluentClass(format!("deg P_1 = {}, expected 2", p1.degree_or_neg())));
    }
    if p2.degree() != Some(1) {
        return Err(HeunError::NotConfluentClass(format!("deg P_2 = {}, expected 1", p2.degree_or_neg())));
    }
    let ode = make_ode(vec![p0, p1, p2])?;
    if classify_point(&ode, &Point::Infinity).kind != SingularKind::IrregularSingular {
        return Err(HeunError::NotConfluentClass("no irregular singular point".into()));
    }
    Ok(ode)
}

pub fn confluent_heun(p: &ConfluentHeunParams) -> Result<LinearOde, HeunError> {
    confluent_from_polys(
        p.p0.clone(),
        p.p1.clone(),
        RatPoly::linear_root(&p.q).scale(&p.alpha),
    )
}
