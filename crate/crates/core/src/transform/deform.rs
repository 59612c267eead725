use serde::{Deserialize, Serialize};

use super::TransformError;
use crate::ode::{make_ode, order_at, LinearOde};
use crate::polyrat::rational::serde_rat;
use crate::polyrat::{radical, rational_roots, BigRat, RatPoly};

/// A root of `P_n` that is not a root of `P_0`; the deformed equation is
/// expected to be apparent there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewApparent {
    #[serde(with = "serde_rat")]
    pub location: BigRat,
    /// Multiplicity as a root of the input's `P_n`.
    pub multiplicity: usize,
    /// Exponent gap predicted for second-order equations (`multiplicity + 1`).
    /// Left empty at higher order, where it has to be computed.
    pub expected_gap: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformResult {
    pub ode: LinearOde,
    pub new_apparent: Vec<NewApparent>,
    /// `radical(P_n)` of the input: the factor used to clear denominators.
    pub clearing_factor: RatPoly,
    /// Part of `P_n` with no rational roots and coprime to `P_0`; its roots are
    /// apparent points that cannot be listed exactly.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unresolved_factor: Option<RatPoly>,
}

/// Raw (not canonicalized) coefficients of the equation for `u = w'`:
/// `Q_0 = R P_0`, `Q_j = R P_j + R P_{j−1}' − S P_{j−1}` with `R = radical(P_n)`
/// and `S = R P_n'/P_n`.
pub fn deform_coefficients(coeffs: &[RatPoly]) -> Result<(Vec<RatPoly>, RatPoly), TransformError> {
    let pn = coeffs.last().expect("at least two coefficients");
    if pn.is_zero() {
        return Err(TransformError::AlreadyIntegrated);
    }
    let r = radical(pn)?;
    let s = (&r * &pn.derivative())
        .exact_div(pn)
        .expect("P_n divides radical(P_n) P_n'");
    let mut out = Vec::with_capacity(coeffs.len());
    for (j, pj) in coeffs.iter().enumerate() {
        let mut q = &r * pj;
        if j > 0 {
            let prev = &coeffs[j - 1];
            q = &(&q + &(&r * &prev.derivative())) - &(&s * prev);
        }
        out.push(q);
    }
    Ok((out, r))
}

/// Differentiates the equation, eliminates `w` through the `P_n w` term and
/// clears denominators with `radical(P_n)`.
pub fn deform(ode: &LinearOde) -> Result<DeformResult, TransformError> {
    let (coeffs, clearing_factor) = deform_coefficients(ode.coeffs())?;
    let out = make_ode(coeffs)?;
    let second_order = ode.order() == 2;
    let rr = rational_roots(ode.last())?;
    let new_apparent = rr
        .iter()
        .filter(|(q, _)| order_at(ode.leading(), q) == Some(0))
        .map(|(q, m)| NewApparent {
            location: q.clone(),
            multiplicity: m,
            expected_gap: second_order.then_some(m + 1),
        })
        .collect();
    let unresolved_factor = if rr.is_split() {
        None
    } else {
        let g = crate::polyrat::poly_gcd(&rr.residual, ode.leading())?;
        let free = rr.residual.exact_div(&g).expect("gcd divides");
        (!free.is_constant()).then_some(free)
    };
    Ok(DeformResult {
        ode: out,
        new_apparent,
        clearing_factor,
        unresolved_factor,
    })
}

/// `k` successive deformations; stage `i + 1` consumes stage `i`'s output.
pub fn deform_iter(ode: &LinearOde, k: usize) -> Result<Vec<DeformResult>, TransformError> {
    let mut chain: Vec<DeformResult> = Vec::with_capacity(k);
    for stage in 0..k {
        let input = chain.last().map_or(ode, |r| &r.ode);
        let next = deform(input).map_err(|e| TransformError::AtStage {
            stage: stage + 1,
            source: Box::new(e),
        })?;
        chain.push(next);
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::is_apparent;
    use crate::ode::{singular_points, SingularKind};
    use crate::polyrat::{int, rat};

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_ints(c)
    }

    /// z(z-1)(z-2) w'' + P_1 w' + (1/16)(z - 3) w, θ_k = 1/2.
    fn heun() -> LinearOde {
        let z = [int(0), int(1), int(2)];
        let p0 = RatPoly::from_roots(&z);
        let p1 = z.iter().fold(RatPoly::zero(), |acc, zk| {
            &acc + &p0.exact_div(&RatPoly::linear_root(zk)).unwrap().scale(&rat(1, 2))
        });
        let p2 = RatPoly::linear_root(&int(3)).scale(&rat(1, 16));
        make_ode(vec![p0, p1, p2]).unwrap()
    }

    #[test]
    fn heun_matches_hand_cleared_form() {
        let e = heun();
        let (p0, p1, p2) = (e.coeff(0), e.coeff(1), e.coeff(2));
        let zq = RatPoly::linear_root(&int(3));
        let expected = make_ode(vec![
            &zq * p0,
            &(&zq * &(p1 + &p0.derivative())) - p0,
            &(&zq * &(p2 + &p1.derivative())) - p1,
        ])
        .unwrap();
        let d = deform(&e).unwrap();
        assert_eq!(d.ode, expected);
        assert_eq!(d.clearing_factor, zq);
        assert_eq!(
            d.new_apparent,
            vec![NewApparent { location: int(3), multiplicity: 1, expected_gap: Some(2) }]
        );
        let v = is_apparent(&d.ode, &int(3)).unwrap();
        assert!(v.is_apparent);
        assert_eq!(v.exponents.values, vec![int(0), int(2)]);
    }

    #[test]
    fn constant_pn_is_a_fixed_point() {
        let e = make_ode(vec![p(&[1]), p(&[]), p(&[1])]).unwrap();
        let chain = deform_iter(&e, 3).unwrap();
        assert_eq!(chain.len(), 3);
        for r in &chain {
            assert_eq!(r.ode, e);
            assert!(r.new_apparent.is_empty());
        }
    }

    #[test]
    fn absent_w_rejected() {
        let e = make_ode(vec![p(&[0, 1]), p(&[1]), p(&[])]).unwrap();
        assert_eq!(deform(&e), Err(TransformError::AlreadyIntegrated));
        let err = deform_iter(&heun(), 1).map(|_| ()).and_then(|_| {
            deform_iter(&e, 2).map(|_| ())
        });
        assert!(matches!(err, Err(TransformError::AtStage { stage: 1, .. })));
    }

    #[test]
    fn second_stage_has_two_apparent_points() {
        assert_eq!(deform_iter(&heun(), 1).unwrap(), vec![deform(&heun()).unwrap()]);
        // θ = (1/2, 1/4, 1/2), t = 2, αθ_∞ = -3/4, q = 3: the second stage's
        // P_2 splits over the rationals.
        let z = [int(0), int(1), int(2)];
        let th = [rat(1, 2), rat(1, 4), rat(1, 2)];
        let p0 = RatPoly::from_roots(&z);
        let p1 = z.iter().zip(&th).fold(RatPoly::zero(), |acc, (zk, t)| {
            &acc + &p0.exact_div(&RatPoly::linear_root(zk)).unwrap().scale(&(int(1) - t))
        });
        let p2 = RatPoly::linear_root(&int(3)).scale(&rat(-3, 4));
        let e = make_ode(vec![p0, p1, p2]).unwrap();
        let chain = deform_iter(&e, 2).unwrap();
        let apparent: Vec<_> = singular_points(&chain[1].ode)
            .of_kind(SingularKind::ApparentSingular)
            .into_iter()
            .map(|p| p.location.clone())
            .collect();
        assert_eq!(apparent, vec![rat(1, 2).into(), rat(11, 2).into()]);
    }

    #[test]
    fn root_shared_with_p0_adds_nothing() {
        let z = [int(0), int(1), int(2)];
        let p0 = RatPoly::from_roots(&z);
        let p1 = p(&[1, -3, 1]);
        let e = make_ode(vec![p0, p1, RatPoly::linear_root(&int(1))]).unwrap();
        let d = deform(&e).unwrap();
        assert!(d.new_apparent.is_empty());
        assert_eq!(
            singular_points(&d.ode).locations(),
            singular_points(&e).locations()
        );
    }
}
