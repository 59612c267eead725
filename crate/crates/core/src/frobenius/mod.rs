//! Local analysis at a point: indicial equation, exponents, Frobenius series
//! and the apparent-singularity decision.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::ode::{moebius_transform, order_at, LinearOde, Moebius, Point, SingularKind, SingularPoint};
use crate::polyrat::rational::{is_integer, is_nonnegative_integer, serde_rat, serde_rat_vec};
use crate::polyrat::{rational_roots, BigRat, RatPoly};

/// Extra series terms beyond the largest exponent gap when testing apparency.
pub const GUARD_TERMS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrobeniusError {
    #[error("irregular singular point at {0}")]
    IrregularPoint(Point),
    #[error("{0} is not a root of the indicial polynomial")]
    NotAnExponent(BigRat),
    #[error("{0} is an ordinary point")]
    NotSingular(Point),
    #[error("indicial polynomial has non-rational roots; no rational exponent series exists")]
    IrrationalExponents,
}

impl FrobeniusError {
    pub fn code(&self) -> &'static str {
        match self {
            FrobeniusError::IrregularPoint(_) => "IrregularPoint",
            FrobeniusError::NotAnExponent(_) => "NotAnExponent",
            FrobeniusError::NotSingular(_) => "NotSingular",
            FrobeniusError::IrrationalExponents => "IrrationalExponents",
        }
    }
}

/// Characteristic exponents at a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndicialExponents {
    /// Rational exponents with multiplicity, ascending.
    #[serde(with = "serde_rat_vec")]
    pub values: Vec<BigRat>,
    /// Monic factor of the indicial polynomial carrying the irrational ones.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub irrational_factor: Option<RatPoly>,
    /// Sum of all `n` exponents, exact even when some are irrational.
    #[serde(with = "serde_rat")]
    pub sum: BigRat,
}

impl IndicialExponents {
    pub fn all_rational(&self) -> bool {
        self.irrational_factor.is_none()
    }

    /// Elementary symmetric functions `e_1..e_n` of the exponents, read off
    /// the indicial polynomial.
    pub fn elementary_symmetric(indicial: &RatPoly) -> Vec<BigRat> {
        let n = indicial.degree().unwrap_or(0);
        let lead = indicial.leading().cloned().unwrap_or_else(BigRat::one);
        (1..=n)
            .map(|k| {
                let c = indicial.coeff(n - k) / &lead;
                if k % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect()
    }
}

/// `L = Σ_j s^j f_j(θ)` at a regular point, `s = z − x`, `θ = s d/ds`, after
/// multiplying the equation by `s^{n − m0}`.
#[derive(Debug, Clone)]
pub struct LocalOperator {
    pub point: Point,
    pub order: usize,
    /// Order of vanishing of `P_0` at the point.
    pub leading_order: usize,
    /// `f_j` as polynomials in `θ`; `f_0` is the indicial polynomial.
    pub f: Vec<RatPoly>,
}

impl LocalOperator {
    pub fn indicial(&self) -> &RatPoly {
        &self.f[0]
    }

    pub fn is_ordinary(&self) -> bool {
        self.leading_order == 0
    }
}

/// `θ(θ−1)…(θ−m+1)`
pub fn falling_factorial(m: usize) -> RatPoly {
    (0..m).fold(RatPoly::one(), |acc, i| {
        &acc * &RatPoly::linear_root(&BigRat::from_integer(BigInt::from(i)))
    })
}

/// Coefficients of `ode` expanded about the point: `P_k(x + s)`, or about
/// `ζ = 0` of the `z = 1/ζ` pullback for the point at infinity.
pub fn local_coefficients(ode: &LinearOde, point: &Point) -> Vec<RatPoly> {
    match point {
        Point::Finite(x) => ode.coeffs().iter().map(|p| p.taylor_shift(x)).collect(),
        Point::Infinity => moebius_transform(ode, &Moebius::inversion())
            .expect("inversion is nonsingular")
            .coeffs()
            .to_vec(),
    }
}

/// Whether the Fuchs pole-order criterion holds for coefficients expanded at 0.
fn fuchs_orders(local: &[RatPoly]) -> (usize, bool) {
    let m0 = local[0].order_at_zero().expect("nonzero P_0");
    let regular = local
        .iter()
        .enumerate()
        .all(|(k, p)| p.order_at_zero().map_or(true, |o| o + k >= m0));
    (m0, regular)
}

pub fn local_operator(ode: &LinearOde, point: &Point) -> Result<LocalOperator, FrobeniusError> {
    let n = ode.order();
    let local = local_coefficients(ode, point);
    let (m0, regular) = fuchs_orders(&local);
    if !regular {
        return Err(FrobeniusError::IrregularPoint(point.clone()));
    }
    let falling: Vec<RatPoly> = (0..=n).map(falling_factorial).collect();
    let jmax = local
        .iter()
        .enumerate()
        .filter_map(|(k, p)| p.degree().map(|d| d + k - m0))
        .max()
        .unwrap_or(0);
    let f = (0..=jmax)
        .map(|j| {
            local.iter().enumerate().fold(RatPoly::zero(), |acc, (k, p)| {
                match (j + m0).checked_sub(k) {
                    Some(i) => &acc + &falling[n - k].scale(&p.coeff(i)),
                    None => acc,
                }
            })
        })
        .collect();
    Ok(LocalOperator {
        point: point.clone(),
        order: n,
        leading_order: m0,
        f,
    })
}

fn exponents_of(op: &LocalOperator) -> IndicialExponents {
    let ind = op.indicial();
    let rr = rational_roots(ind).expect("indicial polynomial is nonzero");
    let mut values = Vec::new();
    for (r, m) in rr.iter() {
        values.extend(std::iter::repeat(r.clone()).take(m));
    }
    let sum = IndicialExponents::elementary_symmetric(ind)
        .first()
        .cloned()
        .unwrap_or_else(BigRat::zero);
    IndicialExponents {
        values,
        irrational_factor: (!rr.is_split()).then_some(rr.residual),
        sum,
    }
}

/// The `n` characteristic exponents at `point`; at infinity they are the
/// exponents in `ζ = 1/z`.
pub fn indicial_exponents(ode: &LinearOde, point: &Point) -> Result<IndicialExponents, FrobeniusError> {
    local_operator(ode, point).map(|op| exponents_of(&op))
}

/// A truncated local solution `s^ρ Σ_{i≤N} a_i s^i`, `s = z − point`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusSolution {
    #[serde(with = "serde_rat")]
    pub point: BigRat,
    #[serde(with = "serde_rat")]
    pub exponent: BigRat,
    #[serde(with = "serde_rat_vec")]
    pub coeffs: Vec<BigRat>,
    pub truncation: usize,
    /// Every resonance met, with the value that had to vanish for a log-free series.
    pub obstructions: Vec<Obstruction>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub offset: usize,
    #[serde(with = "serde_rat")]
    pub value: BigRat,
}

impl FrobeniusSolution {
    pub fn is_log_free(&self) -> bool {
        self.obstructions.iter().all(|o| o.value.is_zero())
    }

    /// The series as a polynomial in `s` when the exponent is a nonnegative integer.
    pub fn as_polynomial(&self) -> Option<RatPoly> {
        if !is_nonnegative_integer(&self.exponent) {
            return None;
        }
        let shift: usize = self.exponent.to_integer().try_into().ok()?;
        Some(RatPoly::monomial(BigRat::one(), shift) * RatPoly::new(self.coeffs.clone()))
    }
}

fn series_from_operator(op: &LocalOperator, exponent: &BigRat, n_terms: usize) -> (Vec<BigRat>, Vec<Obstruction>) {
    let mut a = vec![BigRat::one()];
    let mut obstructions = Vec::new();
    for i in 1..=n_terms {
        let mut rhs = BigRat::zero();
        for j in 1..op.f.len().min(i + 1) {
            let prev = &a[i - j];
            if prev.is_zero() {
                continue;
            }
            let arg = exponent + BigRat::from_integer(BigInt::from(i - j));
            rhs -= op.f[j].eval(&arg) * prev;
        }
        let d = op.f[0].eval(&(exponent + BigRat::from_integer(BigInt::from(i))));
        if d.is_zero() {
            obstructions.push(Obstruction { offset: i, value: rhs });
            a.push(BigRat::zero());
        } else {
            a.push(rhs / d);
        }
    }
    (a, obstructions)
}

/// Frobenius series for `exponent` at a finite point through order `n_terms`.
///
/// At a resonance the free coefficient is set to zero and the obstruction value
/// recorded; a nonzero value means the true solution carries a logarithm.
pub fn frobenius_series(
    ode: &LinearOde,
    point: &BigRat,
    exponent: &BigRat,
    n_terms: usize,
) -> Result<FrobeniusSolution, FrobeniusError> {
    let op = local_operator(ode, &Point::Finite(point.clone()))?;
    if !op.indicial().eval(exponent).is_zero() {
        return Err(FrobeniusError::NotAnExponent(exponent.clone()));
    }
    let (coeffs, obstructions) = series_from_operator(&op, exponent, n_terms);
    Ok(FrobeniusSolution {
        point: point.clone(),
        exponent: exponent.clone(),
        coeffs,
        truncation: n_terms,
        obstructions,
    })
}

/// `L[w] = s^{ρ−n} · poly` for a truncated series `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesResidual {
    pub poly: RatPoly,
    /// Order of vanishing of `P_0` at the point; coefficients below it are zero
    /// for any series.
    pub leading_order: usize,
}

impl SeriesResidual {
    /// Whether every coefficient of `poly` with index `≤ k` is zero.
    pub fn vanishes_through(&self, k: usize) -> bool {
        self.poly.coeffs().iter().take(k + 1).all(Zero::is_zero)
    }
}

/// Substitutes the truncated series directly into the equation, term by term,
/// without the local-operator machinery used to build it.
pub fn series_residual(ode: &LinearOde, sol: &FrobeniusSolution) -> SeriesResidual {
    let n = ode.order();
    let rho = &sol.exponent;
    // T_m(s) = Σ a_i (ρ+i)(ρ+i−1)…(ρ+i−m+1) s^i, so w^{(m)} = s^{ρ−m} T_m.
    let t: Vec<RatPoly> = (0..=n)
        .map(|m| {
            RatPoly::new(
                sol.coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, a)| {
                        let base = rho + BigRat::from_integer(BigInt::from(i));
                        let ff = (0..m).fold(BigRat::one(), |acc, r| {
                            acc * (&base - BigRat::from_integer(BigInt::from(r)))
                        });
                        a * ff
                    })
                    .collect(),
            )
        })
        .collect();
    let poly = ode.coeffs().iter().enumerate().fold(RatPoly::zero(), |acc, (k, p)| {
        let shifted = p.taylor_shift(&sol.point);
        &acc + &(&(&shifted * &RatPoly::monomial(BigRat::one(), k)) * &t[n - k])
    });
    let leading_order = order_at(ode.leading(), &sol.point).unwrap_or(0);
    SeriesResidual { poly, leading_order }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum FailedCondition {
    NonIntegerExponent,
    NegativeExponent,
    RepeatedExponent,
    LogObstruction {
        #[serde(with = "serde_rat")]
        exponent: BigRat,
        offset: usize,
        #[serde(with = "serde_rat")]
        value: BigRat,
    },
}

impl std::fmt::Display for FailedCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FailedCondition::NonIntegerExponent => write!(f, "non-integer exponent"),
            FailedCondition::NegativeExponent => write!(f, "negative exponent"),
            FailedCondition::RepeatedExponent => write!(f, "repeated exponent"),
            FailedCondition::LogObstruction { exponent, offset, value } => write!(
                f,
                "nonzero log obstruction {value} for exponent {exponent} at offset {offset}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApparentVerdict {
    pub is_apparent: bool,
    pub exponents: IndicialExponents,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failed_condition: Option<FailedCondition>,
}

fn apparent_from_operator(op: &LocalOperator) -> ApparentVerdict {
    let exponents = exponents_of(op);
    let fail = |c| ApparentVerdict {
        is_apparent: false,
        exponents: exponents.clone(),
        failed_condition: Some(c),
    };
    if !exponents.all_rational() || !exponents.values.iter().all(is_integer) {
        return fail(FailedCondition::NonIntegerExponent);
    }
    if exponents.values.iter().any(Signed::is_negative) {
        return fail(FailedCondition::NegativeExponent);
    }
    if exponents.values.windows(2).any(|w| w[0] == w[1]) {
        return fail(FailedCondition::RepeatedExponent);
    }
    let top = exponents.values.last().expect("n >= 1 exponents");
    for rho in &exponents.values {
        let gap: usize = (top - rho).to_integer().try_into().expect("small gap");
        let (_, obstructions) = series_from_operator(op, rho, gap + GUARD_TERMS);
        if let Some(o) = obstructions.iter().find(|o| !o.value.is_zero()) {
            return fail(FailedCondition::LogObstruction {
                exponent: rho.clone(),
                offset: o.offset,
                value: o.value.clone(),
            });
        }
    }
    ApparentVerdict {
        is_apparent: true,
        exponents,
        failed_condition: None,
    }
}

/// Decides whether a singular point admits `n` independent holomorphic solutions.
pub fn is_apparent(ode: &LinearOde, point: &BigRat) -> Result<ApparentVerdict, FrobeniusError> {
    let p = Point::Finite(point.clone());
    let op = local_operator(ode, &p)?;
    if op.is_ordinary() {
        return Err(FrobeniusError::NotSingular(p));
    }
    Ok(apparent_from_operator(&op))
}

pub fn classify_point(ode: &LinearOde, point: &Point) -> SingularPoint {
    match local_operator(ode, point) {
        Err(_) => SingularPoint {
            location: point.clone(),
            kind: SingularKind::IrregularSingular,
            exponents: None,
            failed_condition: None,
        },
        Ok(op) if op.is_ordinary() => SingularPoint {
            location: point.clone(),
            kind: SingularKind::Ordinary,
            exponents: None,
            failed_condition: None,
        },
        Ok(op) => {
            let verdict = apparent_from_operator(&op);
            SingularPoint {
                location: point.clone(),
                kind: if verdict.is_apparent {
                    SingularKind::ApparentSingular
                } else {
                    SingularKind::RegularSingular
                },
                exponents: Some(verdict.exponents),
                failed_condition: verdict.failed_condition,
            }
        }
    }
}
