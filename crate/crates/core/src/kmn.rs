//! Brackets for `K(m, n)`, the best constant in von Neumann's inequality
//! for `(m, n)`-band-limited polynomials with operator coefficients.
//!
//! Upper bounds come from functions `h` with `ĥ(k) = 1` on `[m, n]` (their
//! `H¹` norm bounds `K`); lower bounds from `q(1) / ‖H_q‖` for analytic
//! symbols `q` with spectrum in `[m, n]`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, VniError};
use crate::kernels;
use crate::linalg::{self, cx};

/// `4^{-l} C(2l, l)` for `l = 0..count`, by `c_{l+1} = c_l (2l+1)/(2l+2)`.
pub fn central_binomial_ratios(count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut c = 1.0;
    for l in 0..count {
        out.push(c);
        c *= (2 * l + 1) as f64 / (2 * l + 2) as f64;
    }
    out
}

/// Taylor coefficients `û(j) = (m+1)^{-1/2} 4^{-l} C(2l, l)`, `l = ⌊j/(m+1)⌋`.
pub fn u_coeffs(m: usize, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return invalid("count must be at least 1");
    }
    let blocks = (count - 1) / (m + 1) + 1;
    let c = central_binomial_ratios(blocks);
    let s = 1.0 / ((m + 1) as f64).sqrt();
    Ok((0..count).map(|j| s * c[j / (m + 1)]).collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HConstruction {
    /// `ĝ(0..=n)`; `h = g²`.
    pub g: Vec<f64>,
    /// `Σ_{j ≤ n} ĝ(j)²`.
    pub h1_norm: f64,
    /// The same quantity from the block formula with `n + 1 = k(m+1) + r`.
    pub h1_norm_closed: f64,
}

pub fn construct_h(m: usize, n: usize) -> Result<HConstruction> {
    check_band(m, n)?;
    let g = u_coeffs(m, n + 1)?;
    let h1_norm: f64 = g.iter().map(|x| x * x).sum();
    let h1_norm_closed = h1_closed_form(m, n);
    if (h1_norm - h1_norm_closed).abs() > 1e-12 * h1_norm.max(1.0) {
        return Err(VniError::ToleranceViolated(format!(
            "‖h‖ for ({m}, {n}): sum {h1_norm} vs closed form {h1_norm_closed}"
        )));
    }
    Ok(HConstruction { g, h1_norm, h1_norm_closed })
}

fn h1_closed_form(m: usize, n: usize) -> f64 {
    let k = (n + 1) / (m + 1);
    let r = (n + 1) % (m + 1);
    let c = central_binomial_ratios(k + 1);
    let full: f64 = c[..k].iter().map(|x| x * x).sum();
    full + r as f64 / (m + 1) as f64 * c[k] * c[k]
}

/// `‖h‖_{L¹} = (2π)⁻¹∫|g|²` by the trapezoidal rule on a power of two
/// exceeding `2n + 1` nodes, which is exact for `|g|²`.
pub fn h1_norm_quadrature(m: usize, n: usize) -> Result<f64> {
    check_band(m, n)?;
    let g = u_coeffs(m, n + 1)?;
    let nodes = (2 * n + 2).next_power_of_two();
    let mut buf: Vec<Complex64> = g.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    buf.resize(nodes, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_inverse(nodes).process(&mut buf);
    Ok(buf.iter().map(|v| v.norm_sqr()).sum::<f64>() / nodes as f64)
}

/// Coefficients of `g²`.
pub fn self_convolve(g: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; 2 * g.len() - 1];
    for (i, a) in g.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn check_band(m: usize, n: usize) -> Result<()> {
    if m > n {
        return invalid(format!("band ({m}, {n}) needs m ≤ n"));
    }
    Ok(())
}

/// `(lower, upper)` closed forms:
/// `max(1, π⁻¹ log((n+2)/(m+1)))` and `π⁻¹ log((n+1)/(m+1)) + min((n+1)/(m+1), 2)`.
pub fn kmn_formula_bounds(m: usize, n: usize) -> Result<(f64, f64)> {
    check_band(m, n)?;
    let (m1, n1, n2) = ((m + 1) as f64, (n + 1) as f64, (n + 2) as f64);
    let lower = f64::max(1.0, (n2 / m1).ln() / PI);
    let upper = (n1 / m1).ln() / PI + f64::min(n1 / m1, 2.0);
    Ok((lower, upper))
}

/// `(b1, b2, b3)`: certified `H¹` norm of `Σ_{k≤n} z^k` (only for `m = 0`),
/// the dyadic bound `1.5 (b - a + 1)` for the window `2^a ≤ m`, `n ≤ 2^b`,
/// and `√((n+1)/(m+1))`.
pub fn kmn_basic_bounds(m: usize, n: usize) -> Result<(Option<f64>, f64, f64)> {
    check_band(m, n)?;
    let b1 = if m == 0 { Some(kernels::l1_norm_upper_auto(&kernels::dirichlet(n as u64))?) } else { None };
    let a = if m == 0 { 0 } else { m.ilog2() };
    let b = if n <= 1 { 0 } else { usize::BITS - (n - 1).leading_zeros() };
    let b2 = 1.5 * (b - a + 1) as f64;
    let b3 = ((n + 1) as f64 / (m + 1) as f64).sqrt();
    Ok((b1, b2, b3))
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct HankelLower {
    /// `q(1) = Σ_{k=m}^n 1/(k+1)`.
    pub q1: f64,
    /// `‖(q̂(i+j))_{i,j}‖`.
    pub hankel_norm: f64,
    /// `q1 / π`, valid since `‖H_q‖` never exceeds the Hilbert matrix norm `π`.
    pub lower: f64,
    /// `q1 / hankel_norm`.
    pub sharp_lower: f64,
}

/// `q(z) = Σ_{k=m}^n z^k/(k+1)`. Only the leading `(n+1) × (n+1)` block of the
/// truncated Hankel matrix is non-zero, so any `trunc > n` gives the exact norm.
pub fn kmn_lower_hankel(m: usize, n: usize, trunc: usize) -> Result<HankelLower> {
    check_band(m, n)?;
    if trunc < n + 1 {
        return invalid(format!("trunc = {trunc} is below n + 1 = {}", n + 1));
    }
    let q1 = harmonic_window(m, n);
    let size = n + 1;
    let h = linalg::Mat::from_fn(size, size, |i, j| {
        let k = i + j;
        if k >= m && k <= n {
            cx(1.0 / (k + 1) as f64, 0.0)
        } else {
            cx(0.0, 0.0)
        }
    });
    let hankel_norm = linalg::operator_norm(&h)?;
    Ok(HankelLower { q1, hankel_norm, lower: q1 / PI, sharp_lower: q1 / hankel_norm })
}

pub fn harmonic_window(m: usize, n: usize) -> f64 {
    (m..=n).rev().map(|k| 1.0 / (k + 1) as f64).sum()
}

/// Hilbert matrix `(1/(i+j+1))` of size `trunc`.
pub fn hilbert_matrix_norm(trunc: usize) -> Result<f64> {
    let h = linalg::Mat::from_fn(trunc, trunc, |i, j| cx(1.0 / (i + j + 1) as f64, 0.0));
    linalg::operator_norm(&h)
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct KmnBounds {
    pub m: usize,
    pub n: usize,
    pub lower_formula: f64,
    pub upper_formula: f64,
    pub upper_basic1: Option<f64>,
    pub upper_basic2: f64,
    pub upper_basic3: f64,
    pub lower_hankel: f64,
    pub upper_constructive: f64,
}

impl KmnBounds {
    pub fn best_lower(&self) -> f64 {
        self.lower_formula.max(self.lower_hankel)
    }

    pub fn best_upper(&self) -> f64 {
        let mut u = self.upper_formula.min(self.upper_basic2).min(self.upper_basic3).min(self.upper_constructive);
        if let Some(b1) = self.upper_basic1 {
            u = u.min(b1);
        }
        u
    }

    /// `upper_constructive - lower_hankel`.
    pub fn duality_gap(&self) -> f64 {
        self.upper_constructive - self.lower_hankel
    }

    pub const CSV_HEADER: &'static str =
        "m,n,lower_formula,lower_hankel,upper_formula,upper_basic1,upper_basic2,upper_basic3,upper_constructive";

    pub fn csv_row(&self) -> String {
        let b1 = self.upper_basic1.map(|v| format!("{v:.12}")).unwrap_or_default();
        format!(
            "{},{},{:.12},{:.12},{:.12},{},{:.12},{:.12},{:.12}",
            self.m,
            self.n,
            self.lower_formula,
            self.lower_hankel,
            self.upper_formula,
            b1,
            self.upper_basic2,
            self.upper_basic3,
            self.upper_constructive
        )
    }
}

/// All brackets for one band. `lower_hankel` is the certified `q(1)/π`; the
/// exact Hankel norm is available from [`kmn_lower_hankel`].
pub fn kmn_bounds(m: usize, n: usize) -> Result<KmnBounds> {
    let (lower_formula, upper_formula) = kmn_formula_bounds(m, n)?;
    let (upper_basic1, upper_basic2, upper_basic3) = kmn_basic_bounds(m, n)?;
    let lower_hankel = harmonic_window(m, n) / PI;
    let upper_constructive = construct_h(m, n)?.h1_norm;
    let b = KmnBounds {
        m,
        n,
        lower_formula,
        upper_formula,
        upper_basic1,
        upper_basic2,
        upper_basic3,
        lower_hankel,
        upper_constructive,
    };
    if b.best_lower() > b.best_upper() + 1e-9 {
        return Err(VniError::ToleranceViolated(format!(
            "K({m}, {n}): lower {} exceeds upper {}",
            b.best_lower(),
            b.best_upper()
        )));
    }
    Ok(b)
}

/// Every `(m, n)` with `0 ≤ m ≤ n ≤ n_max`, ordered by `n` then `m`.
pub fn kmn_grid(n_max: usize) -> Result<Vec<KmnBounds>> {
    let pairs: Vec<(usize, usize)> = (0..=n_max).flat_map(|n| (0..=n).map(move |m| (m, n))).collect();
    pairs.into_par_iter().map(|(m, n)| kmn_bounds(m, n)).collect()
}
