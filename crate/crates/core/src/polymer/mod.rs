//! The polymer stretching spectral problem
//! `z(z−1)w'' + (−κz(z−1) + 3(z−1)/2 + (b+1)z)w' + ((ν−κ)(z−1) − 2bκz)w = 0`
//! with `κ = bW`, and its deformed equation.

mod highfloat;
mod spectrum;

pub use highfloat::HighFloat;
pub use spectrum::{
    eigenfunction, matching_wronskian, solve_spectrum, EndpointValues, Eigenfunction, SpectralConfig,
    SpectralResult, WronskianSample,
};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::ode::{make_ode, LinearOde, OdeError};
use crate::polyrat::rational::serde_rat;
use crate::polyrat::{int, rat, BigRat, RatPoly};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolymerError {
    #[error("invalid polymer parameters: {0}")]
    InvalidParams(String),
    #[error("nu - kappa - 2 b kappa = 0: P_2 is constant and there is no apparent point")]
    DegenerateApparentPoint,
    #[error("no eigenvalue in ({nu_min}, {nu_max}]")]
    NoEigenvalueInWindow { nu_min: f64, nu_max: f64 },
    #[error("series did not converge with {series_order} terms at {precision_bits} bits; raise --series-order or --precision-bits")]
    PrecisionExhausted { precision_bits: usize, series_order: usize },
    #[error(transparent)]
    Ode(#[from] OdeError),
}

impl PolymerError {
    pub fn code(&self) -> &'static str {
        match self {
            PolymerError::InvalidParams(_) => "InvalidParams",
            PolymerError::DegenerateApparentPoint => "DegenerateApparentPoint",
            PolymerError::NoEigenvalueInWindow { .. } => "NoEigenvalueInWindow",
            PolymerError::PrecisionExhausted { .. } => "PrecisionExhausted",
            PolymerError::Ode(e) => e.code(),
        }
    }
}

fn one() -> BigRat {
    BigRat::one()
}

/// Flexibility `b`, Weissenberg number `W` and equilibrium relaxation time `τ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolymerParams {
    #[serde(with = "serde_rat")]
    pub b: BigRat,
    #[serde(rename = "W", with = "serde_rat")]
    pub w: BigRat,
    #[serde(with = "serde_rat", default = "one")]
    pub tau: BigRat,
}

impl PolymerParams {
    pub fn new(b: BigRat, w: BigRat) -> Self {
        PolymerParams { b, w, tau: one() }
    }

    pub fn kappa(&self) -> BigRat {
        &self.b * &self.w
    }

    pub fn validate(&self) -> Result<(), PolymerError> {
        for (name, v) in [("b", &self.b), ("W", &self.w), ("tau", &self.tau)] {
            if !v.is_positive() {
                return Err(PolymerError::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Parameters of a single equation instance (JSON form used by the family registry).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolymerOdeParams {
    #[serde(with = "serde_rat")]
    pub b: BigRat,
    #[serde(rename = "W", with = "serde_rat")]
    pub w: BigRat,
    #[serde(with = "serde_rat", default = "one")]
    pub tau: BigRat,
    #[serde(with = "serde_rat")]
    pub nu: BigRat,
}

impl PolymerOdeParams {
    pub fn params(&self) -> PolymerParams {
        PolymerParams { b: self.b.clone(), w: self.w.clone(), tau: self.tau.clone() }
    }
}

/// The three coefficient polynomials exactly as written, before canonicalization.
pub fn polymer_coefficients(p: &PolymerParams, nu: &BigRat) -> [RatPoly; 3] {
    let k = p.kappa();
    let z = RatPoly::z();
    let zm1 = RatPoly::linear_root(&one());
    let p0 = &z * &zm1;
    let p1 = &(&p0.scale(&-&k) + &zm1.scale(&rat(3, 2))) + &z.scale(&(&p.b + one()));
    let p2 = &zm1.scale(&(nu - &k)) - &z.scale(&(int(2) * &p.b * &k));
    [p0, p1, p2]
}

pub fn polymer_ode(p: &PolymerParams, nu: &BigRat) -> Result<LinearOde, PolymerError> {
    p.validate()?;
    Ok(make_ode(polymer_coefficients(p, nu).to_vec())?)
}

/// `q = (ν − κ)/(ν − κ − 2bκ)`, the root of `P_2`.
pub fn apparent_location(b: &BigRat, kappa: &BigRat, nu: &BigRat) -> Result<BigRat, PolymerError> {
    let den = nu - kappa - int(2) * b * kappa;
    if den.is_zero() {
        return Err(PolymerError::DegenerateApparentPoint);
    }
    Ok((nu - kappa) / den)
}

/// The deformed equation for `u = w'` written out by hand and cleared by `(z − q)`:
///
/// `(z−q) z(z−1) u''`
/// `+ [(z−q)(P_1 + 2z − 1) − z(z−1)] u'`
/// `+ [(z−q)(P_2 − κ(2z−1) + 5/2 + b) − P_1] u = 0`.
///
/// The `2z − 1` in the `u'` coefficient is `P_0'`.
pub fn polymer_deformed(p: &PolymerParams, nu: &BigRat) -> Result<LinearOde, PolymerError> {
    p.validate()?;
    let k = p.kappa();
    let q = apparent_location(&p.b, &k, nu)?;
    let [p0, p1, p2] = polymer_coefficients(p, nu);
    let zq = RatPoly::linear_root(&q);
    let two_z_minus_1 = RatPoly::from_ints(&[-1, 2]);
    let u2 = &zq * &p0;
    let u1 = &(&zq * &(&p1 + &two_z_minus_1)) - &p0;
    let shift = &two_z_minus_1.scale(&-&k) + &RatPoly::constant(rat(5, 2) + &p.b);
    let u0 = &(&zq * &(&p2 + &shift)) - &p1;
    Ok(make_ode(vec![u2, u1, u0])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::{classify_point, indicial_exponents, is_apparent};
    use crate::heun::confluent_from_polys;
    use crate::ode::{Point, SingularKind};
    use crate::transform::deform;

    fn params(b: i64, w: BigRat) -> PolymerParams {
        PolymerParams::new(int(b), w)
    }

    #[test]
    fn expanded_coefficients() {
        // b = 1, W = 1, nu = 2: kappa = 1
        let [p0, p1, p2] = polymer_coefficients(&params(1, int(1)), &int(2));
        assert_eq!(p0, RatPoly::from_ints(&[0, -1, 1]));
        // -(z^2 - z) + 3/2 z - 3/2 + 2z
        assert_eq!(p1, RatPoly::new(vec![rat(-3, 2), rat(9, 2), int(-1)]));
        // (z - 1) - 2z
        assert_eq!(p2, RatPoly::from_ints(&[-1, -1]));
    }

    #[test]
    fn apparent_location_examples() {
        assert_eq!(apparent_location(&int(1), &int(1), &int(2)).unwrap(), int(-1));
        assert_eq!(apparent_location(&int(2), &int(1), &int(3)).unwrap(), int(-1));
        assert_eq!(apparent_location(&int(5), &int(3), &int(3)).unwrap(), int(0));
        assert_eq!(
            apparent_location(&int(1), &int(1), &int(3)),
            Err(PolymerError::DegenerateApparentPoint)
        );
    }

    #[test]
    fn local_structure() {
        let p = params(100, rat(1, 4));
        let ode = polymer_ode(&p, &rat(273, 10)).unwrap();
        let e0 = indicial_exponents(&ode, &Point::Finite(int(0))).unwrap();
        assert_eq!(e0.values, vec![rat(-1, 2), int(0)]);
        let e1 = indicial_exponents(&ode, &Point::Finite(int(1))).unwrap();
        assert_eq!(e1.values, vec![int(-100), int(0)]);
        assert_eq!(classify_point(&ode, &Point::Infinity).kind, SingularKind::IrregularSingular);
        let [p0, p1, p2] = polymer_coefficients(&p, &rat(273, 10));
        assert!(confluent_from_polys(p0, p1, p2).is_ok());
    }

    #[test]
    fn deformed_matches_transform() {
        let p = params(100, rat(7, 20));
        for nu in [rat(51, 2), int(3), rat(-17, 3)] {
            let hand = polymer_deformed(&p, &nu).unwrap();
            let d = deform(&polymer_ode(&p, &nu).unwrap()).unwrap();
            assert_eq!(hand, d.ode);
            let q = apparent_location(&p.b, &p.kappa(), &nu).unwrap();
            assert_eq!(d.new_apparent.len(), 1);
            assert_eq!(d.new_apparent[0].location, q);
            let v = is_apparent(&hand, &q).unwrap();
            assert!(v.is_apparent);
            assert_eq!(v.exponents.values, vec![int(0), int(2)]);
        }
    }

    #[test]
    fn printed_u_prime_coefficient_lacks_p0_derivative() {
        let p = params(3, rat(1, 2));
        let nu = int(7);
        let q = apparent_location(&p.b, &p.kappa(), &nu).unwrap();
        let [p0, p1, _] = polymer_coefficients(&p, &nu);
        let zq = RatPoly::linear_root(&q);
        let printed = &(&zq * &p1) - &p0;
        let (raw, r) = crate::transform::deform_coefficients(&polymer_coefficients(&p, &nu)).unwrap();
        assert_eq!(r, zq);
        assert_eq!(&raw[1] - &printed, &zq * &RatPoly::from_ints(&[-1, 2]));
    }

    #[test]
    fn invalid_params() {
        assert!(matches!(
            polymer_ode(&params(0, rat(1, 4)), &int(1)),
            Err(PolymerError::InvalidParams(_))
        ));
        let json = serde_json::json!({"b": "100", "W": "0.25"});
        let p: PolymerParams = serde_json::from_value(json).unwrap();
        assert_eq!(p.w, rat(1, 4));
        assert_eq!(p.tau, int(1));
    }
}
