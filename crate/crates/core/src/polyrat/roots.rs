use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{radical, RatPoly};
use super::rational::BigRat;
use super::PolyError;

/// Rational roots of a polynomial plus the root-free factor left over.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRoots {
    /// `(root, multiplicity)`, ascending by root.
    pub roots: Vec<(RootEntry, usize)>,
    /// Monic cofactor without rational roots; `1` when everything split.
    pub residual: RatPoly,
}

/// Newtype so the root serializes as a string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RootEntry(#[serde(with = "super::rational::serde_rat")] pub BigRat);

impl RationalRoots {
    pub fn iter(&self) -> impl Iterator<Item = (&BigRat, usize)> {
        self.roots.iter().map(|(r, m)| (&r.0, *m))
    }

    pub fn distinct(&self) -> Vec<BigRat> {
        self.roots.iter().map(|(r, _)| r.0.clone()).collect()
    }

    pub fn multiplicity_of(&self, x: &BigRat) -> usize {
        self.iter().find(|(r, _)| *r == x).map_or(0, |(_, m)| m)
    }

    pub fn is_split(&self) -> bool {
        self.residual.is_constant()
    }
}

/// All rational roots of `p` with multiplicities.
///
/// A rational root `u/v` (lowest terms) of a primitive integer polynomial with
/// leading coefficient `a` has `v | a`, so `a·root` is an integer. Roots are
/// isolated with a Sturm sequence in the scaled variable `K = a·z` using
/// half-integer interval endpoints, which can never be roots; each unit cell is
/// then tested exactly at its single integer point.
pub fn rational_roots(p: &RatPoly) -> Result<RationalRoots, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut found = Vec::new();
    let mut work = p.monic();

    if let Some(k) = work.order_at_zero().filter(|&k| k > 0) {
        found.push((BigRat::zero(), k));
        work = RatPoly::new(work.coeffs()[k..].to_vec());
    }

    if !work.is_constant() {
        let sqf = radical(&work)?;
        let candidates = isolate_rational_roots(&sqf);
        for r in candidates {
            let factor = RatPoly::linear_root(&r);
            let mut m = 0;
            while let Some(q) = work.exact_div(&factor) {
                work = q;
                m += 1;
            }
            debug_assert!(m > 0);
            found.push((r, m));
        }
    }

    found.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(RationalRoots {
        roots: found.into_iter().map(|(r, m)| (RootEntry(r), m)).collect(),
        residual: work.monic(),
    })
}

fn isolate_rational_roots(sqf: &RatPoly) -> Vec<BigRat> {
    let (_, prim) = sqf.primitive_part();
    let lead = prim.leading().expect("nonzero").to_integer().abs();
    let lead_r = BigRat::from_integer(lead.clone());

    // g(K) = f(K / a); same sign pattern up to a positive factor.
    let scaled = RatPoly::new(
        prim.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c / num_traits::pow(lead_r.clone(), k))
            .collect(),
    );
    let chain = sturm_chain(&scaled);

    // Cauchy bound on |root| of f, times a, rounded up.
    let max_ratio = prim
        .coeffs()
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigRat::zero)
        / prim.leading().unwrap().abs();
    let bound = ((BigRat::one() + max_ratio) * &lead_r).ceil().to_integer() + BigInt::one();

    let half = BigRat::new(BigInt::one(), BigInt::from(2));
    let lo = BigRat::from_integer(-bound.clone()) - &half;
    let hi = BigRat::from_integer(bound) + &half;

    let mut integer_roots = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone(), sign_changes(&chain, &lo), sign_changes(&chain, &hi))];
    while let Some((a, b, va, vb)) = stack.pop() {
        let count = va - vb;
        if count == 0 {
            continue;
        }
        let width = &b - &a;
        if width.is_one() {
            let k = (&a + &half).to_integer();
            if scaled.eval(&BigRat::from_integer(k.clone())).is_zero() {
                integer_roots.push(k);
            }
            continue;
        }
        // Half-integer midpoint: a + floor(width / 2).
        let step = (width.to_integer()).div_floor(&BigInt::from(2));
        let m = &a + BigRat::from_integer(step);
        let vm = sign_changes(&chain, &m);
        stack.push((a, m.clone(), va, vm));
        stack.push((m, b, vm, vb));
    }
    integer_roots
        .into_iter()
        .map(|k| BigRat::new(k, lead.clone()))
        .collect()
}

fn sturm_chain(f: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![f.clone(), f.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]).expect("nonzero divisor");
        if r.is_zero() {
            break;
        }
        // Positive rescaling keeps the sign pattern intact.
        let (c, prim) = (-r).primitive_part();
        let prim = if c.is_negative() { -prim } else { prim };
        chain.push(prim);
    }
    chain
}

fn sign_changes(chain: &[RatPoly], x: &BigRat) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for p in chain {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyrat::rational::{int, rat};
    use proptest::prelude::*;

    fn roots_of(p: &RatPoly) -> Vec<(BigRat, usize)> {
        rational_roots(p)
            .unwrap()
            .iter()
            .map(|(r, m)| (r.clone(), m))
            .collect()
    }

    #[test]
    fn heun_leading_coefficient() {
        // z (z - 1)(z - 3)
        let p0 = RatPoly::from_roots(&[int(0), int(1), int(3)]);
        let rr = rational_roots(&p0).unwrap();
        assert_eq!(roots_of(&p0), vec![(int(0), 1), (int(1), 1), (int(3), 1)]);
        assert_eq!(rr.residual, RatPoly::one());
    }

    #[test]
    fn irreducible_quadratic_is_residual() {
        let p = RatPoly::from_ints(&[1, 0, 1]);
        let rr = rational_roots(&p).unwrap();
        assert!(rr.roots.is_empty());
        assert_eq!(rr.residual, p);
    }

    #[test]
    fn repeated_and_fractional_roots() {
        // (z - 2)^2 (z + 1/3) = z^3 - 11/3 z^2 + 8/3 z + 4/3
        let p = RatPoly::new(vec![rat(4, 3), rat(8, 3), rat(-11, 3), int(1)]);
        assert_eq!(p, &RatPoly::linear_root(&int(2)).pow(2) * &RatPoly::linear_root(&rat(-1, 3)));
        assert_eq!(roots_of(&p), vec![(rat(-1, 3), 1), (int(2), 2)]);
        assert_eq!(rational_roots(&p).unwrap().residual, RatPoly::one());
    }

    #[test]
    fn mixed_rational_and_irrational() {
        // (z^2 - 2)(3z - 1)(z + 5/2)^2 scaled
        let p = &(&RatPoly::from_ints(&[-2, 0, 1]) * &RatPoly::from_ints(&[-1, 3]))
            * &RatPoly::linear_root(&rat(-5, 2)).pow(2);
        let rr = rational_roots(&p.scale(&rat(-7, 9))).unwrap();
        assert_eq!(
            rr.iter().map(|(r, m)| (r.clone(), m)).collect::<Vec<_>>(),
            vec![(rat(-5, 2), 2), (rat(1, 3), 1)]
        );
        assert_eq!(rr.residual, RatPoly::from_ints(&[-2, 0, 1]));
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(rational_roots(&RatPoly::zero()), Err(PolyError::ZeroPolynomial));
        assert!(rational_roots(&RatPoly::from_ints(&[7])).unwrap().roots.is_empty());
    }

    #[test]
    fn large_denominators() {
        let r1 = rat(123_456_789, 987_654_321);
        let r2 = rat(-1_000_000_007, 3);
        let p = RatPoly::from_roots(&[r1.clone(), r2.clone(), r1.clone()]);
        assert_eq!(roots_of(&p), vec![(r2, 1), (r1, 2)]);
    }

    proptest! {
        #[test]
        fn multiplicities_are_exact(
            roots in prop::collection::vec((-12i64..12, 1i64..7, 1usize..4), 1..4),
            extra in 0usize..2,
        ) {
            let mut p = RatPoly::one();
            for (n, d, m) in &roots {
                p = &p * &RatPoly::linear_root(&rat(*n, *d)).pow(*m);
            }
            if extra == 1 {
                p = &p * &RatPoly::from_ints(&[3, 0, 1]);
            }
            let rr = rational_roots(&p).unwrap();
            for (r, m) in rr.iter() {
                let f = RatPoly::linear_root(r);
                prop_assert!(f.pow(m).divides(&p));
                prop_assert!(!f.pow(m + 1).divides(&p));
            }
            let total: usize = rr.iter().map(|(_, m)| m).sum();
            prop_assert_eq!(total + rr.residual.degree().unwrap(), p.degree().unwrap());
        }
    }
}
