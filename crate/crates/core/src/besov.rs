//! Besov-type norms of analytic polynomials: the dyadic sum
//! `Σ (n+1)^a ‖f * W_n‖_∞` and the integral
//! `|f(0)| + ∫₀¹ ‖∂_r f(r·)‖_∞ log(1/(1-r))^a dr`.
//!
//! `∂_r f(rz) = (Rf)(rz)/r` with `R` the radial derivative; in one variable
//! its sup norm is `‖f′_r‖_∞`.
//!
//! Integrals are taken in `s = log(1/(1-r))`, i.e. `r = 1 - e^{-s}`, which
//! turns the weight into `s^a e^{-s}`, and cut off at `s = 60`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, VniError};
use crate::kernels::{self, ConvolveMode};
use crate::kmn;
use crate::linalg::{self, operator_norm, Mat};
use crate::operators::{eval_oppoly, OpPoly, DEFAULT_CONTRACTION_TOL};
use crate::polynomial::{default_points_per_axis, sup_norm, MultiPoly};

pub const DEFAULT_QUAD: usize = 4096;
const S_MAX: f64 = 60.0;
const GL_ORDER: usize = 8;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BesovReport {
    pub a: f64,
    /// `(n, (n+1)^a ‖f * W_n‖_∞)`.
    pub dyadic_terms: Vec<(u32, f64)>,
    pub dyadic_sum: f64,
    pub integral_value: f64,
    /// `integral_value / dyadic_sum`.
    pub ratio: f64,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; order];
    let mut w = vec![0.0; order];
    for i in 0..order {
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(order, t);
            let dt = p / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(order, t);
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    (x, w)
}

fn legendre(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, dp)
}

/// Composite Gauss–Legendre rule on `[0, S_MAX]` with about `quad` nodes.
fn s_rule(quad: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(GL_ORDER);
    let panels = quad.div_ceil(GL_ORDER);
    let h = S_MAX / panels as f64;
    let mut out = Vec::with_capacity(panels * GL_ORDER);
    for k in 0..panels {
        let mid = (k as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            out.push((mid + 0.5 * h * xi, 0.5 * h * wi));
        }
    }
    out
}

fn check_a(a: f64) -> Result<()> {
    if !(a.is_finite() && a >= 0.0) {
        return invalid(format!("exponent a = {a} must be finite and non-negative"));
    }
    Ok(())
}

/// `n = 0 ..= ⌈log₂ deg f⌉ + 1`.
fn dyadic_indices(f: &MultiPoly) -> std::ops::RangeInclusive<u32> {
    let top = *kernels::dyadic_range(f.degree() as u64).end();
    0..=top + 1
}

/// `f * W_n` on the total degree.
pub fn dyadic_piece(f: &MultiPoly, n: u32) -> Result<MultiPoly> {
    kernels::convolve(f, &kernels::dyadic_w(n), ConvolveMode::TotalDegree)
}

/// `max |Σ_n f * W_n - f|` over coefficients.
pub fn resummation_error(f: &MultiPoly) -> Result<f64> {
    let mut sum = MultiPoly::zero(f.dim())?;
    for n in dyadic_indices(f) {
        sum = sum.try_add(&dyadic_piece(f, n)?)?;
    }
    Ok(sum.max_coeff_diff(f))
}

fn certified_sup(p: &MultiPoly) -> Result<f64> {
    if p.is_zero() {
        return Ok(0.0);
    }
    Ok(sup_norm(p, default_points_per_axis(p))?.certified_upper)
}

/// Dyadic side; `integral_value` and `ratio` are left at zero.
pub fn dyadic_besov(f: &MultiPoly, a: f64) -> Result<BesovReport> {
    check_a(a)?;
    let mut terms = Vec::new();
    for n in dyadic_indices(f) {
        let v = certified_sup(&dyadic_piece(f, n)?)?;
        terms.push((n, (n as f64 + 1.0).powf(a) * v));
    }
    let dyadic_sum = terms.iter().map(|t| t.1).sum();
    Ok(BesovReport { a, dyadic_terms: terms, dyadic_sum, integral_value: 0.0, ratio: 0.0 })
}

/// Integral side for several exponents at once; the sup norms at the
/// quadrature nodes are shared.
pub fn integral_besov_multi(f: &MultiPoly, exponents: &[f64], quad: usize) -> Result<Vec<f64>> {
    if quad < 256 {
        return invalid(format!("quad = {quad} is below 256"));
    }
    for &a in exponents {
        check_a(a)?;
    }
    let f0 = f.constant_term().norm();
    let d = f.radial_derivative();
    if d.is_zero() {
        return Ok(vec![f0; exponents.len()]);
    }
    let g = default_points_per_axis(&d);
    let rule = s_rule(quad);
    let sups: Vec<f64> = rule
        .par_iter()
        .map(|&(s, _)| {
            let r = -(-s).exp_m1();
            sup_norm(&d.dilate(r), g).map(|e| e.certified_upper / r)
        })
        .collect::<Result<_>>()?;
    Ok(exponents
        .iter()
        .map(|&a| {
            let integral: f64 = rule
                .iter()
                .zip(&sups)
                .map(|(&(s, w), v)| w * v * (-s).exp() * if a == 0.0 { 1.0 } else { s.powf(a) })
                .sum();
            f0 + integral
        })
        .collect())
}

pub fn integral_besov(f: &MultiPoly, a: f64, quad: usize) -> Result<f64> {
    Ok(integral_besov_multi(f, &[a], quad)?[0])
}

/// Both sides for each exponent.
pub fn besov_reports(f: &MultiPoly, exponents: &[f64], quad: usize) -> Result<Vec<BesovReport>> {
    let integrals = integral_besov_multi(f, exponents, quad)?;
    exponents
        .iter()
        .zip(integrals)
        .map(|(&a, iv)| {
            let mut r = dyadic_besov(f, a)?;
            r.integral_value = iv;
            r.ratio = if r.dyadic_sum == 0.0 { 1.0 } else { iv / r.dyadic_sum };
            Ok(r)
        })
        .collect()
}

/// `N ∫₀¹ r^N log(1/(1-r))^a dr / log(N+1)^a` (no division when `a = 0`).
pub fn integral_asympt_ratio(n: u64, a: f64) -> Result<f64> {
    if n == 0 {
        return invalid("N must be at least 1");
    }
    check_a(a)?;
    let nf = n as f64;
    let rule = s_rule(1 << 14);
    let v: f64 = rule
        .iter()
        .map(|&(s, w)| {
            let r = -(-s).exp_m1();
            let weight = if a == 0.0 { 1.0 } else { s.powf(a) };
            w * (nf * r.ln()).exp() * weight * (-s).exp()
        })
        .sum::<f64>()
        * nf;
    Ok(if a == 0.0 { v } else { v / (nf + 1.0).ln().powf(a) })
}

/// Outcome of the four Bernstein-type inequalities; `None` when the support
/// condition of that half does not apply.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BernsteinReport {
    /// `‖f‖ ≤ r^{-n} ‖f_r‖` (support in `[0, n]`).
    pub a1: Option<bool>,
    /// `‖f′‖ ≤ n ‖f‖` (support in `[0, n]`).
    pub a2: Option<bool>,
    /// `‖f_r‖ ≤ r^n ‖f‖` (support in `[n, ∞)`).
    pub b1: Option<bool>,
    /// `n ‖f‖ ≤ ‖f′‖` (support in `[n, ∞)`).
    pub b2: Option<bool>,
    pub sup_f: f64,
    pub sup_fr: f64,
    pub sup_df: f64,
}

/// Each inequality is tested with the grid value (a lower bound) on the
/// left and the certified value on the right, relative slack `1e-9`.
pub fn bernstein_check(f: &MultiPoly, n: u32, r: f64) -> Result<BernsteinReport> {
    if f.dim() != 1 {
        return Err(VniError::DimensionMismatch("bernstein_check expects one variable".into()));
    }
    if !(r > 0.0 && r <= 1.0) {
        return invalid(format!("r = {r} must lie in (0, 1]"));
    }
    let (lo, hi) = if f.is_zero() { (0, 0) } else { f.band_limits()? };
    let lower_half = hi <= n;
    let upper_half = lo >= n;
    if !lower_half && !upper_half {
        return invalid(format!("support [{lo}, {hi}] is neither inside [0, {n}] nor inside [{n}, ∞)"));
    }
    let est = |p: &MultiPoly| -> Result<(f64, f64)> {
        if p.is_zero() {
            return Ok((0.0, 0.0));
        }
        let e = sup_norm(p, default_points_per_axis(p))?;
        Ok((e.grid_max, e.certified_upper))
    };
    let (f_lo, f_hi) = est(f)?;
    let (fr_lo, fr_hi) = est(&f.dilate(r))?;
    let (df_lo, df_hi) = est(&f.partial(0)?)?;
    let le = |a: f64, b: f64| a <= b * (1.0 + 1e-9) + 1e-300;
    let nf = n as f64;
    let rn = r.powi(n as i32);
    Ok(BernsteinReport {
        a1: lower_half.then(|| le(f_lo * rn, fr_hi)),
        a2: lower_half.then(|| le(df_lo, nf * f_hi)),
        b1: upper_half.then(|| le(fr_lo, rn * f_hi)),
        b2: upper_half.then(|| le(nf * f_lo, df_hi)),
        sup_f: f_lo,
        sup_fr: fr_lo,
        sup_df: df_lo,
    })
}

#[derive(Clone, Debug)]
pub struct FunctionalCalculus {
    /// `Σ_n (f * W_n)(T)`.
    pub value: Mat,
    /// `Σ_n K_upper(band of f * W_n) · sup_{|z|=1} ‖(f * W_n)(z)‖`.
    pub bound: f64,
    /// `‖f(0)‖ + ∫₀¹ sup ‖f′_r‖ dr`.
    pub besov_norm: f64,
    /// `bound / besov_norm`, the measured constant.
    pub constant: f64,
}

fn oppoly_piece(p: &OpPoly, n: u32) -> Option<OpPoly> {
    let (low, _) = p.band();
    let mut out = Vec::new();
    let mut first = None;
    for (i, a) in p.coeffs().iter().enumerate() {
        let k = (low + i) as u64;
        let w = kernels::dyadic_w_at(n, k);
        if w != 0.0 && first.is_none() {
            first = Some(low + i);
        }
        if first.is_some() {
            out.push(a * Complex64::new(w, 0.0));
        }
    }
    let first = first?;
    while out.len() > 1 && out.last().is_some_and(|m| linalg::max_abs_entry(m) == 0.0) {
        out.pop();
    }
    OpPoly::new(first, out).ok()
}

fn circle_points(p: &OpPoly) -> usize {
    let (m, n) = p.band();
    (16 * (n - m + 1)).max(64)
}

/// Dyadic functional calculus for `f(z) = Σ A_k z^k` at `T`.
pub fn besov_functional_calculus(p: &OpPoly, t: &Mat, quad: usize, commute_tol: f64) -> Result<FunctionalCalculus> {
    if t.nrows() != p.size() || t.ncols() != p.size() {
        return Err(VniError::DimensionMismatch("T and the coefficients differ in size".into()));
    }
    let tn = operator_norm(t)?;
    if tn > 1.0 + DEFAULT_CONTRACTION_TOL {
        return invalid(format!("‖T‖ = {tn} exceeds 1"));
    }
    for (i, a) in p.coeffs().iter().enumerate() {
        let c = linalg::commutator_norm(a, t)?;
        if c > commute_tol {
            return Err(VniError::ToleranceViolated(format!(
                "A_{} does not commute with T: ‖[A, T]‖ = {c}",
                p.band().0 + i
            )));
        }
    }
    let (_, high) = p.band();
    let top = *kernels::dyadic_range(high as u64).end() + 1;
    let mut value = linalg::zeros(p.size(), p.size());
    let mut bound = 0.0;
    for n in 0..=top {
        let Some(piece) = oppoly_piece(p, n) else { continue };
        value += eval_oppoly(&piece, t)?;
        let (m, hi) = piece.band();
        let k = kmn::kmn_bounds(m, hi)?.best_upper();
        bound += k * piece.circle_sup_norm(circle_points(&piece))?.certified_upper;
    }
    let besov_norm = oppoly_besov_norm(p, quad)?;
    let constant = if besov_norm == 0.0 { 0.0 } else { bound / besov_norm };
    Ok(FunctionalCalculus { value, bound, besov_norm, constant })
}

/// `‖A_0‖ + ∫₀¹ sup_{|z|=1} ‖f′(rz)‖ dr` for an operator polynomial.
pub fn oppoly_besov_norm(p: &OpPoly, quad: usize) -> Result<f64> {
    if quad < 16 {
        return invalid(format!("quad = {quad} is below 16"));
    }
    let (low, high) = p.band();
    let a0 = if low == 0 { operator_norm(&p.coeffs()[0])? } else { 0.0 };
    if high == 0 {
        return Ok(a0);
    }
    let start = low.max(1);
    let deriv: Vec<Mat> = (start..=high).map(|k| &p.coeffs()[k - low] * Complex64::new(k as f64, 0.0)).collect();
    let rule = s_rule(quad);
    let pieces: Vec<f64> = rule
        .par_iter()
        .map(|&(s, w)| {
            let r = -(-s).exp_m1();
            let scaled: Vec<Mat> = deriv
                .iter()
                .enumerate()
                .map(|(i, a)| a * Complex64::new(r.powi((start - 1 + i) as i32), 0.0))
                .collect();
            let q = OpPoly::new(start - 1, scaled)?;
            Ok(w * (-s).exp() * q.circle_sup_norm(circle_points(&q))?.certified_upper)
        })
        .collect::<Result<_>>()?;
    Ok(a0 + pieces.iter().sum::<f64>())
}
