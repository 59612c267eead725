#![allow(dead_code)]

pub mod fd;

use apparent::heun::{ConfluentHeunParams, HeunParams, MultiHeunParams, ThirdOrderParams};
use apparent::ode::LinearOde;
use apparent::polyrat::{int, rat, BigRat, RatPoly};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn any_rat(r: &mut impl Rng, num: i64, den: i64) -> BigRat {
    rat(r.gen_range(-num..=num), r.gen_range(1..=den))
}

pub fn nonzero_rat(r: &mut impl Rng, num: i64, den: i64) -> BigRat {
    loop {
        let x = any_rat(r, num, den);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Non-integer rational, so that exponents built from it never become apparent.
pub fn fractional(r: &mut impl Rng) -> BigRat {
    loop {
        let x = any_rat(r, 12, 9);
        if !x.is_integer() {
            return x;
        }
    }
}

pub fn avoiding(r: &mut impl Rng, taken: &[BigRat]) -> BigRat {
    loop {
        let x = any_rat(r, 15, 6);
        if !taken.contains(&x) {
            return x;
        }
    }
}

pub fn heun_params(r: &mut impl Rng) -> HeunParams {
    loop {
        let t = avoiding(r, &[int(0), int(1)]);
        let th = [fractional(r), fractional(r), fractional(r)];
        let theta_inf = fractional(r);
        let alpha = int(2) - &th[0] - &th[1] - &th[2] - &theta_inf;
        if alpha.is_zero() {
            continue;
        }
        let q = avoiding(r, &[int(0), int(1), t.clone()]);
        let [theta1, theta2, theta3] = th;
        return HeunParams { t, theta1, theta2, theta3, theta_inf, alpha, q };
    }
}

/// `m` distinct points; `q` repeats `q_mult` copies of one value when given,
/// otherwise `m − 2` distinct accessory zeros.
pub fn multi_params(r: &mut impl Rng, m: usize, repeated: bool) -> MultiHeunParams {
    loop {
        let mut z: Vec<BigRat> = Vec::new();
        while z.len() < m {
            let x = avoiding(r, &z);
            z.push(x);
        }
        let theta: Vec<BigRat> = (0..m).map(|_| fractional(r)).collect();
        let theta_inf = fractional(r);
        let alpha = int(m as i64 - 1) - theta.iter().fold(BigRat::zero(), |a, t| a + t) - &theta_inf;
        if alpha.is_zero() {
            continue;
        }
        let mut q: Vec<BigRat> = Vec::new();
        if repeated {
            let x = avoiding(r, &z);
            q = vec![x; m - 2];
        } else {
            while q.len() < m - 2 {
                let mut taken = z.clone();
                taken.extend(q.iter().cloned());
                let x = avoiding(r, &taken);
                q.push(x);
            }
        }
        return MultiHeunParams { z, theta, theta_inf, alpha, q };
    }
}

pub fn third_params(r: &mut impl Rng) -> ThirdOrderParams {
    let t = avoiding(r, &[int(0), int(1)]);
    let q = avoiding(r, &[int(0), int(1), t.clone()]);
    ThirdOrderParams {
        t,
        alpha: fractional(r),
        beta: fractional(r),
        theta2: fractional(r),
        theta3: fractional(r),
        kappa: nonzero_rat(r, 9, 5),
        q,
    }
}

/// Third-order parameters built backwards from chosen exponents `(a, b, c)` at ∞:
/// `β = (e_1 + e_2 + α)/(α − 1)`, `θ_2 + θ_3 = −e_1 − α − β`, `κ = abc`.
pub fn third_params_from_infinity(r: &mut impl Rng) -> (ThirdOrderParams, [BigRat; 3]) {
    loop {
        let abc = [nonzero_rat(r, 9, 4), nonzero_rat(r, 9, 4), nonzero_rat(r, 9, 4)];
        let alpha = fractional(r);
        if alpha.is_one() {
            continue;
        }
        let e1 = &abc[0] + &abc[1] + &abc[2];
        let e2 = &abc[0] * &abc[1] + &abc[1] * &abc[2] + &abc[0] * &abc[2];
        let beta = (&e1 + &e2 + &alpha) / (&alpha - BigRat::one());
        let theta_sum = -&e1 - &alpha - &beta;
        let theta2 = any_rat(r, 9, 5);
        let theta3 = &theta_sum - &theta2;
        let t = avoiding(r, &[int(0), int(1)]);
        let q = avoiding(r, &[int(0), int(1), t.clone()]);
        let kappa = &abc[0] * &abc[1] * &abc[2];
        return (ThirdOrderParams { t, alpha, beta, theta2, theta3, kappa, q }, abc);
    }
}

pub fn confluent_params(r: &mut impl Rng) -> ConfluentHeunParams {
    let roots = match r.gen_range(0..3) {
        0 => vec![int(0), avoiding(r, &[int(0)])],
        1 => vec![int(0)],
        _ => vec![int(0), int(0)],
    };
    let p0 = RatPoly::from_roots(&roots);
    let p1 = RatPoly::new(vec![fractional(r), any_rat(r, 9, 4), nonzero_rat(r, 9, 4)]);
    let q = avoiding(r, &roots);
    ConfluentHeunParams { p0, p1, alpha: nonzero_rat(r, 9, 4), q }
}

/// Rational point where the equation is ordinary.
pub fn ordinary_point(r: &mut impl Rng, ode: &LinearOde) -> BigRat {
    loop {
        let x = any_rat(r, 20, 7);
        if !ode.leading().eval(&x).is_zero() {
            return x;
        }
    }
}
