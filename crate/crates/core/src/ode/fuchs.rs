use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{singular_points, LinearOde, Point, SingularKind};
use crate::polyrat::rational::{serde_rat, serde_rat_opt};
use crate::polyrat::{squarefree_decomposition, BigRat, RatPoly};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointExponentSum {
    pub location: Point,
    #[serde(with = "serde_rat")]
    pub sum: BigRat,
}

/// Singular points at the roots of a factor of `P_0` with no rational roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnresolvedPoints {
    pub factor: RatPoly,
    pub count: usize,
    pub regular: bool,
    #[serde(with = "serde_rat_opt", skip_serializing_if = "Option::is_none", default)]
    pub exponent_sum: Option<BigRat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuchsReport {
    /// Every singular point, infinity included, is regular.
    pub fuchsian: bool,
    pub irregular_points: Vec<Point>,
    /// Number of singular points `s`, counting irrational ones.
    pub singular_count: usize,
    pub per_point: Vec<PointExponentSum>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unresolved: Option<UnresolvedPoints>,
    #[serde(with = "serde_rat_opt", skip_serializing_if = "Option::is_none", default)]
    pub exponent_sum: Option<BigRat>,
    /// `(s − 2) · n(n − 1)/2`
    #[serde(with = "serde_rat_opt", skip_serializing_if = "Option::is_none", default)]
    pub expected_sum: Option<BigRat>,
    pub identity_holds: bool,
}

fn small(n: usize) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

/// Sum of the residues of `P_1/P_0` over all finite poles.
fn total_finite_residue(p0: &RatPoly, p1: &RatPoly) -> BigRat {
    let Some(d) = p0.degree().filter(|&d| d > 0) else {
        return BigRat::zero();
    };
    let (_, rem) = p1.div_rem(p0).expect("P_0 nonzero");
    rem.coeff(d - 1) / p0.leading().expect("nonzero")
}

/// Fuchsian test and the exponent-sum relation
/// `Σ_{all points} Σ exponents = (s − 2) n(n − 1)/2`.
///
/// Exponent sums come from the indicial polynomial, so irrational exponents are
/// handled exactly. Points at irrational roots of `P_0` are totalled through the
/// residue theorem applied to `P_1/P_0`.
pub fn fuchs_check(ode: &LinearOde) -> FuchsReport {
    let n = ode.order();
    let half = small(n * (n - 1)) / small(2);
    let sp = singular_points(ode);

    let irregular_points: Vec<Point> = sp
        .points
        .iter()
        .filter(|p| p.kind == SingularKind::IrregularSingular)
        .map(|p| p.location.clone())
        .collect();
    let per_point: Vec<PointExponentSum> = sp
        .points
        .iter()
        .filter_map(|p| {
            p.exponents.as_ref().map(|e| PointExponentSum {
                location: p.location.clone(),
                sum: e.sum.clone(),
            })
        })
        .collect();

    let unresolved = sp.unresolved_factor.as_ref().map(|factor| {
        let parts = squarefree_decomposition(factor).expect("nonzero factor");
        let count = parts
            .iter()
            .map(|(g, _)| g.degree().unwrap_or(0))
            .sum::<usize>();
        let regular = parts.iter().all(|(g, m)| {
            ode.coeffs().iter().enumerate().all(|(k, pk)| {
                pk.is_zero() || g.pow(m.saturating_sub(k)).divides(pk)
            })
        });
        let exponent_sum = regular.then(|| {
            // Each regular point contributes n(n-1)/2 − Res(P_1/P_0).
            let rational_res = per_point
                .iter()
                .filter(|p| !p.location.is_infinity())
                .fold(BigRat::zero(), |acc, p| acc + &half - &p.sum);
            let total = total_finite_residue(ode.leading(), ode.coeff(1));
            small(count) * &half - (total - rational_res)
        });
        UnresolvedPoints {
            factor: factor.clone(),
            count,
            regular,
            exponent_sum,
        }
    });

    let unresolved_ok = unresolved.as_ref().map_or(true, |u| u.regular);
    let fuchsian = irregular_points.is_empty() && unresolved_ok;
    let singular_count = sp.points.len() + unresolved.as_ref().map_or(0, |u| u.count);

    let (exponent_sum, expected_sum) = if fuchsian {
        let mut total = per_point.iter().fold(BigRat::zero(), |acc, p| acc + &p.sum);
        if let Some(s) = unresolved.as_ref().and_then(|u| u.exponent_sum.as_ref()) {
            total += s;
        }
        let expected = (small(singular_count) - small(2)) * &half;
        (Some(total), Some(expected))
    } else {
        (None, None)
    };
    let identity_holds = fuchsian && exponent_sum == expected_sum;
    FuchsReport {
        fuchsian,
        irregular_points,
        singular_count,
        per_point,
        unresolved,
        exponent_sum,
        expected_sum,
        identity_holds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::make_ode;
    use crate::polyrat::{int, rat};

    #[test]
    fn constant_coefficients_are_not_fuchsian() {
        let ode = make_ode(vec![RatPoly::from_ints(&[1]), RatPoly::zero(), RatPoly::from_ints(&[1])]).unwrap();
        let r = fuchs_check(&ode);
        assert!(!r.fuchsian);
        assert_eq!(r.irregular_points, vec![Point::Infinity]);
        assert!(!r.identity_holds);
    }

    #[test]
    fn hypergeometric_relation() {
        // three points, n = 2: sum = 1
        let (a, b, c) = (rat(1, 3), rat(3, 4), rat(1, 2));
        let ode = make_ode(vec![
            RatPoly::from_ints(&[0, 1, -1]),
            RatPoly::new(vec![c, -(&a + &b + int(1))]),
            RatPoly::constant(-(&a * &b)),
        ])
        .unwrap();
        let r = fuchs_check(&ode);
        assert!(r.fuchsian);
        assert_eq!(r.singular_count, 3);
        assert_eq!(r.exponent_sum, Some(int(1)));
        assert!(r.identity_holds);
    }

    #[test]
    fn irrational_points_counted() {
        // (z^2 - 2) w'' + 2z w' - 6w = 0, singular at ±√2 and ∞.
        let ode = make_ode(vec![
            RatPoly::from_ints(&[-2, 0, 1]),
            RatPoly::from_ints(&[0, 2]),
            RatPoly::from_ints(&[-6]),
        ])
        .unwrap();
        let r = fuchs_check(&ode);
        assert!(r.fuchsian);
        let u = r.unresolved.as_ref().unwrap();
        assert_eq!(u.count, 2);
        // 2z/(z^2-2) has residue 1 at each root, so each has exponent sum 1 - 1 = 0;
        // infinity has {-2, 3}.
        assert_eq!(u.exponent_sum, Some(int(0)));
        assert_eq!(r.singular_count, 3);
        assert!(r.identity_holds, "{r:?}");
    }
}
