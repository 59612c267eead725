//! Two-sided Frobenius shooting for the bounded eigenfunctions.
//!
//! At `z = 0` and `z = 1` the bounded local solutions are the exponent-0
//! Frobenius series (the other exponents are `−1/2` and `−b`). Both are summed
//! at the matching point and the normalized Wronskian
//! `D(ν) = (w_L w_R' − w_L' w_R) / (|(w_L, w_L')| |(w_R, w_R')|)` is scanned for
//! sign changes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::highfloat::HighFloat;
use super::{polymer_coefficients, PolymerError, PolymerParams};
use crate::polyrat::rational::{rat_to_f64, serde_rat};
use crate::polyrat::{int, rat, BigRat, RatPoly};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpectralConfig {
    pub precision_bits: usize,
    pub series_order: usize,
    /// Caps for the automatic increase of the two values above.
    pub max_precision_bits: usize,
    pub max_series_order: usize,
    #[serde(with = "serde_rat")]
    pub z_match: BigRat,
    /// Number of grid cells in the scan of `[ν_min, ν_max]`.
    pub grid: usize,
    pub rel_tol: f64,
    /// Also report endpoint values of each eigenfunction.
    pub strict: bool,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            precision_bits: 256,
            series_order: 200,
            max_precision_bits: 4096,
            max_series_order: 6400,
            z_match: rat(1, 2),
            grid: 400,
            rel_tol: 1e-10,
            strict: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WronskianSample {
    pub nu: f64,
    pub value: f64,
}

/// `w(0)` and `w(1)` of the matched eigenfunction, relative to `max |w|` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointValues {
    pub nu: f64,
    pub w0: f64,
    pub w1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    /// `bτ/ν_1`.
    #[serde(rename = "T_rel")]
    pub t_rel: f64,
    /// Apparent point of the deformed equation at `ν_1`.
    pub q: Option<f64>,
    pub wronskian_samples: Vec<WronskianSample>,
    pub series_order: usize,
    pub precision_bits: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub endpoint_values: Option<Vec<EndpointValues>>,
}

/// Local coefficients around an endpoint, split as `A + ν B`.
struct LocalProblem {
    fixed: [Vec<BigRat>; 3],
    per_nu: [Vec<BigRat>; 3],
}

impl LocalProblem {
    /// `z = x0 + σ s`; the `k`-th derivative picks up `σ^k`.
    fn new(p: &PolymerParams, x0: i64, sigma: i64) -> Self {
        let map = RatPoly::from_ints(&[x0, sigma]);
        let local = |nu: &BigRat| -> [RatPoly; 3] {
            let [p0, p1, p2] = polymer_coefficients(p, nu);
            [
                p0.compose(&map).scale(&int(sigma * sigma)),
                p1.compose(&map).scale(&int(sigma)),
                p2.compose(&map),
            ]
        };
        let base = local(&int(0));
        let unit = local(&int(1));
        let coeffs = |q: &RatPoly| q.coeffs().to_vec();
        let per_nu = [0, 1, 2].map(|k| coeffs(&(&unit[k] - &base[k])));
        LocalProblem { fixed: base.map(|q| coeffs(&q)), per_nu }
    }

    fn at(&self, nu: &HighFloat, prec: usize) -> [Vec<HighFloat>; 3] {
        [0, 1, 2].map(|k| {
            let len = self.fixed[k].len().max(self.per_nu[k].len());
            (0..len)
                .map(|j| {
                    let a = self.fixed[k].get(j).map(|c| HighFloat::from_rat(c, prec));
                    let b = self.per_nu[k].get(j).map(|c| HighFloat::from_rat(c, prec) * nu);
                    match (a, b) {
                        (Some(a), Some(b)) => a + b,
                        (Some(a), None) => a,
                        (None, Some(b)) => b,
                        (None, None) => HighFloat::zero(prec),
                    }
                })
                .collect()
        })
    }
}

fn get(v: &[HighFloat], j: usize) -> Option<&HighFloat> {
    v.get(j).filter(|x| !x.is_zero())
}

/// Exponent-0 series coefficients `a_0 = 1, a_1, …, a_{n−1}`.
///
/// The coefficient of `s^m` in `P_0 w'' + P_1 w' + P_2 w` is
/// `Σ_j P0_j (m+2−j)(m+1−j) a_{m+2−j} + P1_j (m+1−j) a_{m+1−j} + P2_j a_{m−j}`;
/// the `a_{m+1}` part is `(m+1)(m P0_1 + P1_0)`.
fn series_coefficients(c: &[Vec<HighFloat>; 3], n: usize, prec: usize) -> Vec<HighFloat> {
    let [p0, p1, p2] = c;
    let p0_1 = p0.get(1).cloned().unwrap_or_else(|| HighFloat::zero(prec));
    let p1_0 = p1.first().cloned().unwrap_or_else(|| HighFloat::zero(prec));
    let mut a = Vec::with_capacity(n);
    a.push(HighFloat::from_i64(1, prec));
    for m in 0..n.saturating_sub(1) {
        let mut sum = HighFloat::zero(prec);
        for j in 2..p0.len() {
            if let (Some(c), true) = (get(p0, j), m + 1 >= j) {
                let f = ((m + 2 - j) * (m + 1 - j)) as i64;
                if f != 0 {
                    sum = sum + (c * &a[m + 2 - j]).mul_i64(f);
                }
            }
        }
        for j in 1..p1.len() {
            if let (Some(c), true) = (get(p1, j), m + 1 >= j) {
                let f = (m + 1 - j) as i64;
                if f != 0 {
                    sum = sum + (c * &a[m + 1 - j]).mul_i64(f);
                }
            }
        }
        for j in 0..p2.len() {
            if let (Some(c), true) = (get(p2, j), m >= j) {
                sum = sum + c * &a[m - j];
            }
        }
        let div = (p0_1.mul_i64(m as i64) + &p1_0).mul_i64(m as i64 + 1);
        a.push(-(sum / div));
    }
    a
}

/// Value and first two derivatives of `Σ a_n s^n`, with the largest term and
/// the largest of the last few terms (as `log2`) for convergence checks.
struct Summed {
    d: [HighFloat; 3],
    max_term: f64,
    tail: f64,
}

fn sum_series(a: &[HighFloat], s: &HighFloat, prec: usize) -> Summed {
    let mut d = [HighFloat::zero(prec), HighFloat::zero(prec), HighFloat::zero(prec)];
    let mut pow = HighFloat::from_i64(1, prec);
    let mut powers = Vec::with_capacity(a.len());
    for _ in 0..a.len() {
        powers.push(pow.clone());
        pow = &pow * s;
    }
    let mut max_term = f64::NEG_INFINITY;
    let mut tail = f64::NEG_INFINITY;
    let tail_from = a.len().saturating_sub(8);
    let log_s = s.log2();
    for (n, an) in a.iter().enumerate() {
        if an.is_zero() {
            continue;
        }
        let t = an * &powers[n];
        // Largest of |a_n s^n|, n|a_n s^(n-1)|, n^2|a_n s^(n-2)|.
        let nf = (n.max(1)) as f64;
        let mag = t.log2() + (2.0 * nf.log2() - 2.0 * log_s).max(0.0);
        max_term = max_term.max(mag);
        if n >= tail_from {
            tail = tail.max(mag);
        }
        d[0] = &d[0] + &t;
        if n >= 1 {
            d[1] = &d[1] + &(an * &powers[n - 1]).mul_i64(n as i64);
        }
        if n >= 2 {
            d[2] = &d[2] + &(an * &powers[n - 2]).mul_i64((n * (n - 1)) as i64);
        }
    }
    Summed { d, max_term, tail }
}

/// Working precision and order of one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Budget {
    order: usize,
    prec: usize,
}

struct Shooter {
    left: LocalProblem,
    right: LocalProblem,
    z_match: BigRat,
}

/// Matched local solutions at one `ν`.
struct Shot {
    left: Vec<HighFloat>,
    right: Vec<HighFloat>,
    /// `w_L, w_L'` and `w_R, w_R'` in `z` at the matching point.
    l: [HighFloat; 2],
    r: [HighFloat; 2],
    budget: Budget,
}

const SAFETY_BITS: f64 = 60.0;

impl Shooter {
    fn new(p: &PolymerParams, z_match: &BigRat) -> Self {
        Shooter {
            left: LocalProblem::new(p, 0, 1),
            right: LocalProblem::new(p, 1, -1),
            z_match: z_match.clone(),
        }
    }

    /// One attempt; `Err` carries the budget that should be tried next.
    fn try_shoot(&self, nu: f64, b: Budget) -> Result<Shot, Budget> {
        let nu_h = HighFloat::from_f64(nu, b.prec);
        let sl = HighFloat::from_rat(&self.z_match, b.prec);
        let sr = HighFloat::from_rat(&(int(1) - &self.z_match), b.prec);
        let left = series_coefficients(&self.left.at(&nu_h, b.prec), b.order, b.prec);
        let right = series_coefficients(&self.right.at(&nu_h, b.prec), b.order, b.prec);
        let ls = sum_series(&left, &sl, b.prec);
        let rs = sum_series(&right, &sr, b.prec);
        let mut next = b;
        for s in [&ls, &rs] {
            let smallest = s.d[0].log2().max(s.d[1].log2());
            let cancel = (s.max_term - smallest).max(0.0);
            if s.max_term - s.tail < cancel + SAFETY_BITS {
                next.order = b.order * 2;
            }
            if (b.prec as f64) < cancel + SAFETY_BITS + 4.0 {
                next.prec = next.prec.max(b.prec * 2);
            }
        }
        if next != b {
            return Err(next);
        }
        let [lv, ld, _] = ls.d;
        let [rv, rd, _] = rs.d;
        Ok(Shot { left, right, l: [lv, ld], r: [rv, -rd], budget: b })
    }

    fn shoot(&self, nu: f64, start: Budget, cfg: &SpectralConfig) -> Result<Shot, PolymerError> {
        let mut b = start;
        loop {
            match self.try_shoot(nu, b) {
                Ok(shot) => return Ok(shot),
                Err(next) => {
                    if next.order > cfg.max_series_order || next.prec > cfg.max_precision_bits {
                        return Err(PolymerError::PrecisionExhausted {
                            precision_bits: b.prec,
                            series_order: b.order,
                        });
                    }
                    b = next;
                }
            }
        }
    }
}

impl Shot {
    fn wronskian(&self) -> HighFloat {
        let [lv, ld] = &self.l;
        let [rv, rd] = &self.r;
        let w = &(lv * rd) - &(ld * rv);
        let nl = (lv * lv + ld * ld).sqrt();
        let nr = (rv * rv + rd * rd).sqrt();
        w / (nl * nr)
    }
}

/// A matched eigenfunction: the left series on `[0, z_m]`, the scaled right
/// series on `(z_m, 1]`.
#[derive(Debug, Clone)]
pub struct Eigenfunction {
    pub nu: f64,
    z_match: f64,
    left: Vec<HighFloat>,
    right: Vec<HighFloat>,
    scale: HighFloat,
    prec: usize,
}

impl Eigenfunction {
    /// `[w, w', w'']` at `z ∈ [0, 1]`, normalized so that `w(0) = 1`.
    pub fn eval(&self, z: f64) -> [f64; 3] {
        if z <= self.z_match {
            let s = HighFloat::from_f64(z, self.prec);
            let d = sum_series(&self.left, &s, self.prec).d;
            [d[0].to_f64(), d[1].to_f64(), d[2].to_f64()]
        } else {
            let s = HighFloat::from_f64(1.0 - z, self.prec);
            let d = sum_series(&self.right, &s, self.prec).d;
            let c = &self.scale;
            [(&d[0] * c).to_f64(), -(&d[1] * c).to_f64(), (&d[2] * c).to_f64()]
        }
    }

    pub fn endpoint_values(&self, samples: usize) -> EndpointValues {
        let n = samples.max(2);
        let peak = (0..=n)
            .map(|i| self.eval(i as f64 / n as f64)[0].abs())
            .fold(0.0, f64::max);
        EndpointValues { nu: self.nu, w0: 1.0 / peak, w1: self.scale.to_f64() / peak }
    }
}

fn make_eigenfunction(nu: f64, shot: Shot, z_match: f64) -> Eigenfunction {
    let [lv, ld] = &shot.l;
    let [rv, rd] = &shot.r;
    let scale = if rv.abs() >= rd.abs() { lv / rv } else { ld / rd };
    Eigenfunction {
        nu,
        z_match,
        left: shot.left,
        right: shot.right,
        scale,
        prec: shot.budget.prec,
    }
}

/// The bounded solution pair at `ν` matched into one function.
pub fn eigenfunction(p: &PolymerParams, nu: f64, cfg: &SpectralConfig) -> Result<Eigenfunction, PolymerError> {
    p.validate()?;
    let shooter = Shooter::new(p, &cfg.z_match);
    let start = Budget { order: cfg.series_order, prec: cfg.precision_bits };
    let shot = shooter.shoot(nu, start, cfg)?;
    Ok(make_eigenfunction(nu, shot, rat_to_f64(&cfg.z_match)))
}

/// Normalized matching Wronskian at `ν` with the budget that was needed.
pub fn matching_wronskian(p: &PolymerParams, nu: f64, cfg: &SpectralConfig) -> Result<(f64, usize, usize), PolymerError> {
    let shooter = Shooter::new(p, &cfg.z_match);
    let start = Budget { order: cfg.series_order, prec: cfg.precision_bits };
    let shot = shooter.shoot(nu, start, cfg)?;
    Ok((shot.wronskian().to_f64(), shot.budget.order, shot.budget.prec))
}

fn validate(p: &PolymerParams, nu_min: f64, nu_max: f64, count: usize, cfg: &SpectralConfig) -> Result<(), PolymerError> {
    p.validate()?;
    let bad = |m: String| Err(PolymerError::InvalidParams(m));
    if !(nu_min.is_finite() && nu_max.is_finite() && nu_min < nu_max) {
        return bad(format!("need nu_min < nu_max, got ({nu_min}, {nu_max})"));
    }
    if count == 0 {
        return bad("count must be at least 1".into());
    }
    if cfg.grid == 0 || cfg.series_order < 2 || cfg.precision_bits < 64 {
        return bad("grid >= 1, series_order >= 2 and precision_bits >= 64 are required".into());
    }
    if !(cfg.rel_tol > 0.0) {
        return bad("rel_tol must be positive".into());
    }
    let zero = int(0);
    if cfg.z_match <= zero || cfg.z_match >= int(1) {
        return bad(format!("matching point {} must lie in (0, 1)", cfg.z_match));
    }
    Ok(())
}

/// Eigenvalues of the bounded two-point problem in `(ν_min, ν_max]`, smallest first.
pub fn solve_spectrum(
    p: &PolymerParams,
    nu_min: f64,
    nu_max: f64,
    count: usize,
    cfg: &SpectralConfig,
) -> Result<SpectralResult, PolymerError> {
    validate(p, nu_min, nu_max, count, cfg)?;
    let shooter = Shooter::new(p, &cfg.z_match);

    // Calibrate once at the window ends so every grid point uses the same start.
    let mut start = Budget { order: cfg.series_order, prec: cfg.precision_bits };
    for nu in [nu_min, nu_max] {
        let used = shooter.shoot(nu, start, cfg)?.budget;
        start = Budget { order: start.order.max(used.order), prec: start.prec.max(used.prec) };
    }

    let grid: Vec<f64> = (0..=cfg.grid)
        .map(|i| nu_min + (nu_max - nu_min) * i as f64 / cfg.grid as f64)
        .collect();
    let evaluated: Vec<(i32, f64, Budget)> = grid
        .par_iter()
        .map(|&nu| {
            let shot = shooter.shoot(nu, start, cfg)?;
            let w = shot.wronskian();
            Ok((w.signum(), w.to_f64(), shot.budget))
        })
        .collect::<Result<_, PolymerError>>()?;

    let mut used = start;
    for (_, _, b) in &evaluated {
        used.order = used.order.max(b.order);
        used.prec = used.prec.max(b.prec);
    }

    let sign_at = |nu: f64| -> Result<(i32, Budget), PolymerError> {
        let shot = shooter.shoot(nu, start, cfg)?;
        Ok((shot.wronskian().signum(), shot.budget))
    };

    let mut eigenvalues = Vec::new();
    for i in 0..cfg.grid {
        if eigenvalues.len() == count {
            break;
        }
        let (s0, s1) = (evaluated[i].0, evaluated[i + 1].0);
        if s1 == 0 {
            eigenvalues.push(grid[i + 1]);
            continue;
        }
        if s0 == 0 || s0 == s1 {
            continue;
        }
        let (mut lo, mut hi) = (grid[i], grid[i + 1]);
        loop {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= cfg.rel_tol * mid.abs() || mid <= lo || mid >= hi {
                break;
            }
            let (s, b) = sign_at(mid)?;
            used.order = used.order.max(b.order);
            used.prec = used.prec.max(b.prec);
            if s == 0 {
                lo = mid;
                hi = mid;
                break;
            }
            if s == s0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        eigenvalues.push(0.5 * (lo + hi));
    }
    if eigenvalues.is_empty() {
        return Err(PolymerError::NoEigenvalueInWindow { nu_min, nu_max });
    }

    let nu1 = eigenvalues[0];
    let b = rat_to_f64(&p.b);
    let kappa = rat_to_f64(&p.kappa());
    let t_rel = b * rat_to_f64(&p.tau) / nu1;
    let den = nu1 - kappa - 2.0 * b * kappa;
    let q = (den != 0.0).then(|| (nu1 - kappa) / den);

    let endpoint_values = if cfg.strict {
        let z_m = rat_to_f64(&cfg.z_match);
        let mut out = Vec::with_capacity(eigenvalues.len());
        for &nu in &eigenvalues {
            let shot = shooter.shoot(nu, start, cfg)?;
            out.push(make_eigenfunction(nu, shot, z_m).endpoint_values(200));
        }
        Some(out)
    } else {
        None
    };

    Ok(SpectralResult {
        eigenvalues,
        t_rel,
        q,
        wronskian_samples: grid
            .iter()
            .zip(&evaluated)
            .map(|(&nu, &(_, value, _))| WronskianSample { nu, value })
            .collect(),
        series_order: used.order,
        precision_bits: used.prec,
        endpoint_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(w: BigRat) -> PolymerParams {
        PolymerParams::new(int(100), w)
    }

    #[test]
    fn series_satisfies_the_equation_locally() {
        // Check a few recurrence steps against the equation at a small s.
        let p = params(rat(1, 4));
        let lp = LocalProblem::new(&p, 0, 1);
        let prec = 256;
        let c = lp.at(&HighFloat::from_f64(27.0, prec), prec);
        let a = series_coefficients(&c, 120, prec);
        let s = HighFloat::from_f64(0.01, prec);
        let d = sum_series(&a, &s, prec).d;
        let ev = |v: &[HighFloat]| {
            v.iter().rev().fold(HighFloat::zero(prec), |acc, c| &(&acc * &s) + c)
        };
        let r = &(&(&ev(&c[0]) * &d[2]) + &(&ev(&c[1]) * &d[1])) + &(&ev(&c[2]) * &d[0]);
        assert!(r.log2() < -150.0, "residual 2^{}", r.log2());
    }

    #[test]
    fn first_eigenvalue_and_sign_change() {
        let p = params(rat(1, 4));
        let cfg = SpectralConfig { grid: 40, ..Default::default() };
        let r = solve_spectrum(&p, 0.0, 100.0, 2, &cfg).unwrap();
        assert_eq!(r.eigenvalues.len(), 2);
        assert!((r.eigenvalues[0] - 27.3010536621731).abs() < 1e-8, "{:?}", r.eigenvalues);
        assert!(r.eigenvalues[1] > r.eigenvalues[0]);
        assert!((r.t_rel - 100.0 / r.eigenvalues[0]).abs() < 1e-12);
        let nu1 = r.eigenvalues[0];
        let (lo, _, _) = matching_wronskian(&p, nu1 * (1.0 - 1e-6), &cfg).unwrap();
        let (hi, _, _) = matching_wronskian(&p, nu1 * (1.0 + 1e-6), &cfg).unwrap();
        assert!(lo * hi < 0.0);
    }

    #[test]
    fn precision_exhausted_when_capped() {
        let p = params(rat(9, 20));
        let cfg = SpectralConfig { max_series_order: 200, ..Default::default() };
        assert!(matches!(
            solve_spectrum(&p, 0.0, 50.0, 1, &cfg),
            Err(PolymerError::PrecisionExhausted { .. })
        ));
    }

    #[test]
    fn empty_window() {
        let p = params(rat(1, 4));
        let cfg = SpectralConfig { grid: 8, ..Default::default() };
        assert!(matches!(
            solve_spectrum(&p, 0.0, 20.0, 1, &cfg),
            Err(PolymerError::NoEigenvalueInWindow { .. })
        ));
        assert!(matches!(
            solve_spectrum(&p, 5.0, 1.0, 1, &cfg),
            Err(PolymerError::InvalidParams(_))
        ));
    }
}
