use serde::{Deserialize, Serialize};

use super::{LinearOde, Point};
use crate::frobenius::{classify_point, FailedCondition, IndicialExponents};
use crate::polyrat::{rational_roots, RatPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SingularKind {
    Ordinary,
    RegularSingular,
    IrregularSingular,
    ApparentSingular,
}

impl SingularKind {
    pub fn is_regular(self) -> bool {
        matches!(self, SingularKind::RegularSingular | SingularKind::ApparentSingular)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub location: Point,
    pub kind: SingularKind,
    /// Present exactly for regular and apparent points.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exponents: Option<IndicialExponents>,
    /// Why a regular point is not apparent.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failed_condition: Option<FailedCondition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularPoints {
    pub points: Vec<SingularPoint>,
    /// Factor of `P_0` without rational roots; its roots are singular but not
    /// classified.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unresolved_factor: Option<RatPoly>,
}

impl SingularPoints {
    pub fn locations(&self) -> Vec<Point> {
        self.points.iter().map(|p| p.location.clone()).collect()
    }

    pub fn finite_locations(&self) -> Vec<Point> {
        self.locations().into_iter().filter(|p| !p.is_infinity()).collect()
    }

    pub fn get(&self, location: &Point) -> Option<&SingularPoint> {
        self.points.iter().find(|p| &p.location == location)
    }

    pub fn of_kind(&self, kind: SingularKind) -> Vec<&SingularPoint> {
        self.points.iter().filter(|p| p.kind == kind).collect()
    }
}

/// Every rational root of `P_0` and the point at infinity, classified;
/// ordinary points are left out.
pub fn singular_points(ode: &LinearOde) -> SingularPoints {
    let rr = rational_roots(ode.leading()).expect("P_0 is nonzero");
    let mut points: Vec<SingularPoint> = rr
        .iter()
        .map(|(r, _)| classify_point(ode, &Point::Finite(r.clone())))
        .collect();
    points.push(classify_point(ode, &Point::Infinity));
    points.retain(|p| p.kind != SingularKind::Ordinary);
    SingularPoints {
        points,
        unresolved_factor: (!rr.is_split()).then_some(rr.residual),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::make_ode;
    use crate::polyrat::{int, RatPoly};

    #[test]
    fn constant_coefficients_only_infinity() {
        let ode = make_ode(vec![RatPoly::from_ints(&[1]), RatPoly::zero(), RatPoly::from_ints(&[1])]).unwrap();
        let sp = singular_points(&ode);
        assert_eq!(sp.locations(), vec![Point::Infinity]);
        assert_eq!(sp.points[0].kind, SingularKind::IrregularSingular);
        assert!(sp.points[0].exponents.is_none());
    }

    #[test]
    fn irrational_factor_is_reported() {
        // (z^2 - 2) z w'' + w' = 0
        let ode = make_ode(vec![
            RatPoly::from_ints(&[0, -2, 0, 1]),
            RatPoly::from_ints(&[1]),
            RatPoly::zero(),
        ])
        .unwrap();
        let sp = singular_points(&ode);
        assert_eq!(sp.unresolved_factor, Some(RatPoly::from_ints(&[-2, 0, 1])));
        assert_eq!(sp.finite_locations(), vec![Point::Finite(int(0))]);
    }

    #[test]
    fn ordinary_infinity_is_omitted() {
        // w'' + 2/(z) w' = 0 ⇔ z w'' + 2 w' = 0: at infinity exponents {0, 1}
        // in ζ with no obstruction, an ordinary point of the pullback.
        let ode = make_ode(vec![RatPoly::from_ints(&[0, 1]), RatPoly::from_ints(&[2]), RatPoly::zero()]).unwrap();
        let sp = singular_points(&ode);
        assert_eq!(sp.locations(), vec![Point::Finite(int(0))]);
    }
}
