//! Finite-difference eigenvalues of the polymer problem, used only as an
//! independent check on the shooting solver.
//!
//! Self-adjoint form: `−(p w')' + (κ − 2bκ z/(1−z)) r w = ν r w` with
//! `p = z^{3/2} (1−z)^{b+1} e^{−κz}` and `r = p/z`.
//! The mesh is uniform in `t ∈ [0, 1]` with `z = 1 − exp(−Y t^3)`, which
//! crowds nodes towards `z = 1` where the solution has its boundary layer.
//! Only `z_1..z_N` are unknowns; the coefficient `p` vanishes at both ends, so
//! the end treatment only affects higher-order terms.

pub struct FdMatrix {
    diag: Vec<f64>,
    off: Vec<f64>,
}

pub const STRETCH: f64 = 5.0;

pub fn assemble(b: f64, w: f64, n: usize) -> FdMatrix {
    let k = b * w;
    let y: Vec<f64> = (0..=n)
        .map(|i| {
            let t = i as f64 / n as f64;
            STRETCH * t * t * t
        })
        .collect();
    let z: Vec<f64> = y.iter().map(|&y| -(-y).exp_m1()).collect();
    // log p at cell midpoints divided by the cell width
    let lw: Vec<f64> = (0..n)
        .map(|i| {
            let ym = 0.5 * (y[i] + y[i + 1]);
            let zm = -(-ym).exp_m1();
            let h = z[i + 1] - z[i];
            -k * zm + 1.5 * zm.ln() - (b + 1.0) * ym - h.ln()
        })
        .collect();
    // log of the lumped weight r times the dual cell length at z_1..z_N
    let lm: Vec<f64> = (1..=n)
        .map(|i| {
            let dual = if i < n { 0.5 * (z[i + 1] - z[i - 1]) } else { 0.5 * (z[n] - z[n - 1]) };
            -k * z[i] + 0.5 * z[i].ln() - (b + 1.0) * y[i] + dual.ln()
        })
        .collect();
    let mut diag: Vec<f64> = (0..n)
        .map(|i| {
            let zi = z[i + 1];
            let xi = (-y[i + 1]).exp();
            (lw[i] - lm[i]).exp() + k - 2.0 * b * k * zi / xi
        })
        .collect();
    for i in 0..n - 1 {
        diag[i] += (lw[i + 1] - lm[i]).exp();
    }
    let off = (0..n - 1)
        .map(|i| -(lw[i + 1] - 0.5 * (lm[i] + lm[i + 1])).exp())
        .collect();
    FdMatrix { diag, off }
}

impl FdMatrix {
    /// Number of eigenvalues below `x` (Sturm count from the LDLᵀ pivots).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut piv = 1.0;
        for i in 0..self.diag.len() {
            let e2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            piv = self.diag[i] - x - if i == 0 { 0.0 } else { e2 / piv };
            if piv == 0.0 {
                piv = -f64::EPSILON * (self.diag[i].abs() + x.abs() + 1.0);
            }
            if piv < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Smallest eigenvalue in `(0, hi)`.
    pub fn smallest_positive(&self, hi: f64) -> Option<f64> {
        let below_zero = self.count_below(0.0);
        if self.count_below(hi) <= below_zero {
            return None;
        }
        let (mut lo, mut up) = (0.0, hi);
        for _ in 0..100 {
            let mid = 0.5 * (lo + up);
            if self.count_below(mid) > below_zero {
                up = mid;
            } else {
                lo = mid;
            }
        }
        Some(0.5 * (lo + up))
    }
}

/// Second-order scheme, so one Richardson step: `(4 ν_{2N} − ν_N)/3`.
pub fn first_eigenvalue(b: f64, w: f64, n: usize) -> Option<f64> {
    let coarse = assemble(b, w, n).smallest_positive(10.0 * b)?;
    let fine = assemble(b, w, 2 * n).smallest_positive(10.0 * b)?;
    Some((4.0 * fine - coarse) / 3.0)
}
