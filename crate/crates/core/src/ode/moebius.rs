use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{make_ode, LinearOde, OdeError, Point};
use crate::polyrat::rational::serde_rat;
use crate::polyrat::{BigRat, RatPoly};

/// The substitution `z = (aζ + b) / (cζ + d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Moebius {
    #[serde(with = "serde_rat")]
    pub a: BigRat,
    #[serde(with = "serde_rat")]
    pub b: BigRat,
    #[serde(with = "serde_rat")]
    pub c: BigRat,
    #[serde(with = "serde_rat")]
    pub d: BigRat,
}

impl Moebius {
    pub fn new(a: BigRat, b: BigRat, c: BigRat, d: BigRat) -> Self {
        Moebius { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(BigRat::one(), BigRat::zero(), BigRat::zero(), BigRat::one())
    }

    /// `z = ζ + s`
    pub fn translation(s: BigRat) -> Self {
        Self::new(BigRat::one(), s, BigRat::zero(), BigRat::one())
    }

    /// `z = 1/ζ`, which moves `z = ∞` to `ζ = 0`.
    pub fn inversion() -> Self {
        Self::new(BigRat::zero(), BigRat::one(), BigRat::one(), BigRat::zero())
    }

    pub fn det(&self) -> BigRat {
        &self.a * &self.d - &self.b * &self.c
    }

    /// Substituting `self` and then `inner` (`ζ = inner(η)`) equals
    /// substituting the matrix product `self · inner`.
    pub fn then(&self, inner: &Moebius) -> Moebius {
        Moebius::new(
            &self.a * &inner.a + &self.b * &inner.c,
            &self.a * &inner.b + &self.b * &inner.d,
            &self.c * &inner.a + &self.d * &inner.c,
            &self.c * &inner.b + &self.d * &inner.d,
        )
    }

    /// `z` as a function of `ζ`.
    pub fn apply(&self, zeta: &Point) -> Point {
        mobius_eval(&self.a, &self.b, &self.c, &self.d, zeta)
    }

    /// `ζ` as a function of `z`: the inverse map `ζ = (d z − b) / (−c z + a)`.
    pub fn preimage(&self, z: &Point) -> Point {
        mobius_eval(&self.d, &-self.b.clone(), &-self.c.clone(), &self.a, z)
    }
}

fn mobius_eval(a: &BigRat, b: &BigRat, c: &BigRat, d: &BigRat, x: &Point) -> Point {
    match x {
        Point::Infinity => {
            if c.is_zero() {
                Point::Infinity
            } else {
                Point::Finite(a / c)
            }
        }
        Point::Finite(x) => {
            let den = c * x + d;
            if den.is_zero() {
                Point::Infinity
            } else {
                Point::Finite((a * x + b) / den)
            }
        }
    }
}

/// Rewrites the equation in `ζ` where `z = (aζ + b)/(cζ + d)`.
///
/// With `g = dζ/dz = (cζ+d)^2/Δ`, the chain rule gives
/// `d^j w/dz^j = Σ_i c_j[i](ζ) d^i w/dζ^i` with `c_{j+1}[i] = g c_j[i]' + g c_j[i−1]`.
/// The coefficients `P_k(z(ζ))` are cleared by `(cζ+d)^M`, `M = max deg P_k`.
pub fn moebius_transform(ode: &LinearOde, map: &Moebius) -> Result<LinearOde, OdeError> {
    let delta = map.det();
    if delta.is_zero() {
        return Err(OdeError::SingularMoebius);
    }
    let n = ode.order();
    let num = RatPoly::new(vec![map.b.clone(), map.a.clone()]);
    let den = RatPoly::new(vec![map.d.clone(), map.c.clone()]);
    let g = (&den * &den).scale(&delta.recip());

    // chain[j][i]: coefficient of d^i/dζ^i in d^j/dz^j
    let mut chain: Vec<Vec<RatPoly>> = vec![vec![RatPoly::one()]];
    for j in 0..n {
        let prev = &chain[j];
        let mut next = vec![RatPoly::zero(); j + 2];
        for (i, cji) in prev.iter().enumerate() {
            next[i] = &next[i] + &(&g * &cji.derivative());
            next[i + 1] = &next[i + 1] + &(&g * cji);
        }
        chain.push(next);
    }

    let big_m = ode
        .coeffs()
        .iter()
        .filter_map(RatPoly::degree)
        .max()
        .unwrap_or(0);
    let num_pows: Vec<RatPoly> = (0..=big_m).map(|i| num.pow(i)).collect();
    let den_pows: Vec<RatPoly> = (0..=big_m).map(|i| den.pow(i)).collect();
    let pulled: Vec<RatPoly> = ode
        .coeffs()
        .iter()
        .map(|p| {
            p.coeffs().iter().enumerate().fold(RatPoly::zero(), |acc, (i, c)| {
                &acc + &(&num_pows[i] * &den_pows[big_m - i]).scale(c)
            })
        })
        .collect();

    let mut out = vec![RatPoly::zero(); n + 1];
    for (k, pk) in pulled.iter().enumerate() {
        let m = n - k;
        for (i, cmi) in chain[m].iter().enumerate() {
            let j = n - i;
            out[j] = &out[j] + &(pk * cmi);
        }
    }
    make_ode(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::indicial_exponents;
    use crate::ode::singular_points;
    use crate::polyrat::{int, rat};

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_ints(c)
    }

    fn finite_singular(ode: &LinearOde) -> Vec<Point> {
        singular_points(ode)
            .points
            .into_iter()
            .map(|s| s.location)
            .filter(|l| !l.is_infinity())
            .collect()
    }

    #[test]
    fn translation_moves_singular_points() {
        // z(z-1) w'' + (1/2 - 2z) w' - w/4 = 0: singular at 0, 1
        let ode = make_ode(vec![
            p(&[0, -1, 1]),
            RatPoly::new(vec![rat(1, 2), int(-2)]),
            RatPoly::constant(rat(-1, 4)),
        ])
        .unwrap();
        let moved = moebius_transform(&ode, &Moebius::translation(int(1))).unwrap();
        assert_eq!(
            finite_singular(&moved),
            vec![Point::Finite(int(-1)), Point::Finite(int(0))]
        );
    }

    #[test]
    fn identity_is_identity() {
        let ode = make_ode(vec![p(&[0, -1, 1]), p(&[3, -7]), p(&[2])]).unwrap();
        assert_eq!(moebius_transform(&ode, &Moebius::identity()).unwrap(), ode);
    }

    #[test]
    fn inversion_exposes_infinity_exponents() {
        // Hypergeometric z(1-z)w'' + (c-(a+b+1)z)w' - ab w = 0 with a=1/3, b=3/4, c=1/2.
        // At infinity the exponents are {a, b}.
        let (a, b, c) = (rat(1, 3), rat(3, 4), rat(1, 2));
        let ode = make_ode(vec![
            RatPoly::from_ints(&[0, 1, -1]),
            RatPoly::new(vec![c, -(&a + &b + int(1))]),
            RatPoly::constant(-(&a * &b)),
        ])
        .unwrap();
        let pulled = moebius_transform(&ode, &Moebius::inversion()).unwrap();
        let at0 = indicial_exponents(&pulled, &Point::Finite(int(0))).unwrap();
        assert_eq!(at0.values, vec![a.clone(), b.clone()]);
        let direct = indicial_exponents(&ode, &Point::Infinity).unwrap();
        assert_eq!(direct.values, vec![a, b]);
    }

    #[test]
    fn singular_map_rejected() {
        let ode = make_ode(vec![p(&[1]), p(&[0])]).unwrap();
        let m = Moebius::new(int(1), int(2), int(2), int(4));
        assert_eq!(moebius_transform(&ode, &m), Err(OdeError::SingularMoebius));
    }

    #[test]
    fn preimage_inverts_apply() {
        let m = Moebius::new(int(2), int(-1), int(3), int(5));
        for x in [Point::Finite(rat(7, 3)), Point::Finite(int(0)), Point::Infinity] {
            assert_eq!(m.apply(&m.preimage(&x)), x);
        }
    }

    fn arb_ode() -> impl proptest::strategy::Strategy<Value = LinearOde> {
        use proptest::prelude::*;
        let poly = |max: usize| {
            prop::collection::vec(-4i64..5, 1..=max).prop_map(|c| RatPoly::from_ints(&c))
        };
        (poly(3), poly(3), poly(2))
            .prop_filter_map("P_0 nonzero", |(a, b, c)| make_ode(vec![a, b, c]).ok())
    }

    fn arb_map() -> impl proptest::strategy::Strategy<Value = Moebius> {
        use proptest::prelude::*;
        (-3i64..4, -3i64..4, -3i64..4, -3i64..4)
            .prop_map(|(a, b, c, d)| Moebius::new(int(a), int(b), int(c), int(d)))
            .prop_filter("nonsingular", |m| !m.det().is_zero())
    }

    proptest::proptest! {
        #[test]
        fn composition_is_matrix_product(ode in arb_ode(), m1 in arb_map(), m2 in arb_map()) {
            let stepwise = moebius_transform(&moebius_transform(&ode, &m1).unwrap(), &m2).unwrap();
            let direct = moebius_transform(&ode, &m1.then(&m2)).unwrap();
            proptest::prop_assert_eq!(stepwise, direct);
        }

        #[test]
        fn canonicalization_is_idempotent(ode in arb_ode()) {
            let again = make_ode(ode.coeffs().to_vec()).unwrap();
            proptest::prop_assert_eq!(again, ode);
        }
    }
}
