//! Polydisc bounds: band splitting, Schur–Agler upper bounds for band-limited
//! polynomials, bounds on `C(d, n)` and the Kaijser–Varopoulos example.
//!
//! Splitting: with `V` the trapezoid kernel of [`kernels::splitting_kernel`],
//! `p_1 = p *_1 V`, `p_j = (p - p_1 - … - p_{j-1}) *_j V` for `j < d` and
//! `p_d = p - p_1 - … - p_{d-1}`. Part `j` is band-limited in `z_j` to
//! `[⌊m/2d⌋, n]`, and `‖p_j‖_∞ ≤ s(1+s)^{j-1}‖p‖_∞` (`j < d`),
//! `‖p_d‖_∞ ≤ (1+s)^{d-1}‖p‖_∞` with `s = ‖V‖_{L¹}`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::besov;
use crate::error::{invalid, Result, VniError};
use crate::kernels::{self, ConvolveMode, KernelProfile};
use crate::kmn;
use crate::linalg::{self, cx, operator_norm, Mat};
use crate::operators::{eval_poly_tuple, MatTuple};
use crate::polynomial::{self, sup_norm, sup_norm_default, MultiPoly, SupNormEstimate};

/// Published factor bounds for the three parts when `d = 3` and `‖V‖ ≤ 6`.
pub const EXPLICIT_FACTORS_D3: [f64; 3] = [6.0, 42.0, 43.0];

/// Grothendieck constant bound used in Dixon's estimate.
pub const GROTHENDIECK_BOUND: f64 = 1.5;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub value: f64,
    /// `ln(value)`, finite even where `value` overflows.
    pub ln_value: f64,
    pub certified: bool,
    pub provenance: String,
    /// Constituents of the bound in the order they are multiplied or summed.
    pub items: Vec<(String, f64)>,
}

impl BoundReport {
    fn new(name: &str, value: f64, provenance: &str, items: Vec<(String, f64)>) -> Self {
        BoundReport {
            name: name.into(),
            value,
            ln_value: value.ln(),
            certified: true,
            provenance: provenance.into(),
            items,
        }
    }

    fn from_ln(name: &str, ln_value: f64, provenance: &str, items: Vec<(String, f64)>) -> Self {
        BoundReport {
            name: name.into(),
            value: ln_value.exp(),
            ln_value,
            certified: true,
            provenance: provenance.into(),
            items,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SplitResult {
    pub parts: Vec<MultiPoly>,
    pub kernel: Option<KernelProfile>,
    /// Certified `‖V‖_{L¹}` (0 when splitting was bypassed).
    pub kernel_l1: f64,
    /// Certified `‖p_j‖_∞` over the grid value of `‖p‖_∞`.
    pub sup_norm_factors: Vec<f64>,
    /// `s(1+s)^{j-1}` and `(1+s)^{d-1}` with `s = kernel_l1`.
    pub chain_bounds: Vec<f64>,
    pub part_sup: Vec<SupNormEstimate>,
    pub input_sup: SupNormEstimate,
    /// `max |Σ_j p̂_j(α) - p̂(α)|`.
    pub sum_error: f64,
    /// Largest deviation from `p̂(α) Π_{i<j}(1 - V̂(α_i))` over the residuals.
    pub residual_error: f64,
    /// Lower end of the per-axis band, `⌊m/2d⌋`.
    pub band_low: u32,
}

/// `s(1+s)^{j-1}` for `j < d`, then `(1+s)^{d-1}`.
pub fn chain_factors(d: usize, s: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (1..d).map(|j| s * (1.0 + s).powi(j as i32 - 1)).collect();
    v.push((1.0 + s).powi(d as i32 - 1));
    v
}

/// Band splitting of an `(m, n)`-band-limited polynomial (total degree).
pub fn split(p: &MultiPoly, m: u32, n: u32) -> Result<SplitResult> {
    let d = p.dim();
    if m > n {
        return invalid(format!("band ({m}, {n}) needs m ≤ n"));
    }
    if !p.is_zero() {
        let (lo, hi) = p.band_limits()?;
        if lo < m || hi > n {
            return invalid(format!("polynomial has total degrees in [{lo}, {hi}], outside [{m}, {n}]"));
        }
    }
    let input_sup = sup_norm_default(p)?;
    let zero = MultiPoly::zero(d)?;
    if n == 0 || d == 1 {
        let mut parts = vec![p.clone()];
        parts.resize(d, zero.clone());
        let part_sup: Vec<SupNormEstimate> = parts.iter().map(sup_norm_default).collect::<Result<_>>()?;
        let factors = part_sup.iter().map(|e| ratio(e.certified_upper, input_sup.grid_max)).collect();
        return Ok(SplitResult {
            parts,
            kernel: None,
            kernel_l1: 0.0,
            sup_norm_factors: factors,
            chain_bounds: chain_factors(d, 0.0),
            part_sup,
            input_sup,
            sum_error: 0.0,
            residual_error: 0.0,
            band_low: 0,
        });
    }
    let v = kernels::splitting_kernel(d, m as u64, n as u64)?;
    let s = kernels::l1_norm_upper_auto(&v)?;
    let band_low = kernels::splitting_parameters(d, m as u64, n as u64).0 as u32;

    let mut parts = Vec::with_capacity(d);
    let mut residual = p.clone();
    let mut residual_error = 0.0f64;
    for j in 0..d {
        let expected =
            p.map_coeffs(|alpha, c| c * alpha.entries()[..j].iter().map(|&a| 1.0 - v.at(a as i64)).product::<f64>());
        residual_error = residual_error.max(residual.max_coeff_diff(&expected));
        let part = if j + 1 < d { kernels::convolve(&residual, &v, ConvolveMode::Axis(j))? } else { residual.clone() };
        residual = residual.try_sub(&part)?;
        parts.push(part);
    }
    let mut total = zero;
    for q in &parts {
        total = total.try_add(q)?;
    }
    let sum_error = total.max_coeff_diff(p);

    for (j, q) in parts.iter().enumerate() {
        if q.is_zero() {
            continue;
        }
        let (lo, hi) = q.band_limits_wrt(j)?;
        if lo < band_low || hi > n {
            return Err(VniError::ToleranceViolated(format!(
                "part {} has z_{} degrees in [{lo}, {hi}], outside [{band_low}, {n}]",
                j + 1,
                j + 1
            )));
        }
    }
    let part_sup: Vec<SupNormEstimate> = parts.iter().map(sup_norm_default).collect::<Result<_>>()?;
    let factors = part_sup.iter().map(|e| ratio(e.certified_upper, input_sup.grid_max)).collect();
    Ok(SplitResult {
        parts,
        kernel: Some(v),
        kernel_l1: s,
        sup_norm_factors: factors,
        chain_bounds: chain_factors(d, s),
        part_sup,
        input_sup,
        sum_error,
        residual_error,
        band_low,
    })
}

fn ratio(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a / b
    }
}

/// Best certified upper bound for `K(m, n)`.
pub fn k_upper(m: u32, n: u32) -> Result<f64> {
    Ok(kmn::kmn_bounds(m as usize, n as usize)?.best_upper())
}

/// Certified bound on `‖p‖_SA / ‖p‖_∞`. The item `"absolute"` bounds `‖p‖_SA`.
pub fn sa_upper_band(p: &MultiPoly) -> Result<BoundReport> {
    let d = p.dim();
    if p.is_zero() {
        return invalid("the zero polynomial has no band");
    }
    if d < 3 {
        let s = sup_norm_default(p)?;
        return Ok(BoundReport::new(
            "sa_upper_band",
            1.0,
            "von Neumann / Andô inequality",
            vec![("absolute".into(), s.certified_upper)],
        ));
    }
    let (m, n) = p.band_limits()?;
    if n == 0 {
        let v = p.constant_term().norm();
        return Ok(BoundReport::new("sa_upper_band", 1.0, "constant polynomial", vec![("absolute".into(), v)]));
    }
    let sp = split(p, m, n)?;
    let kb = k_upper(sp.band_low, n)?;
    let k0 = k_upper(0, n)?;
    let inner = k0.powi(d as i32 - 3);
    let part_total: f64 = sp.part_sup.iter().map(|e| if e.grid_max == 0.0 { 0.0 } else { e.certified_upper }).sum();
    let absolute = part_total * kb * inner;
    let value = absolute / sp.input_sup.grid_max;
    let mut items: Vec<(String, f64)> =
        sp.part_sup.iter().enumerate().map(|(j, e)| (format!("sup_part_{}", j + 1), e.certified_upper)).collect();
    items.push(("kernel_l1".into(), sp.kernel_l1));
    items.push((format!("K({},{})", sp.band_low, n), kb));
    items.push((format!("K(0,{n})^{}", d - 3), inner));
    items.push(("sup_p_grid".into(), sp.input_sup.grid_max));
    items.push(("absolute".into(), absolute));
    Ok(BoundReport::new("sa_upper_band", value, "band splitting with certified kernel and K(m,n) bounds", items))
}

/// Worst-case pipeline bound on `C(d, n)`:
/// `Σ_j chain_j · K(⌊n/2d⌋, n) · K(0, n)^{d-3}`.
pub fn pipeline_bound(d: usize, n: u32) -> Result<BoundReport> {
    if d == 0 || n == 0 {
        return invalid("pipeline bound needs d ≥ 1 and n ≥ 1");
    }
    if d < 3 {
        return Ok(BoundReport::new("pipeline", 1.0, "von Neumann / Andô inequality", vec![]));
    }
    let v = kernels::splitting_kernel(d, n as u64, n as u64)?;
    let s = kernels::l1_norm_upper_auto(&v)?;
    let chain = chain_factors(d, s);
    let k = kernels::splitting_parameters(d, n as u64, n as u64).0 as u32;
    let kb = k_upper(k, n)?;
    let k0 = k_upper(0, n)?;
    let inner = k0.powi(d as i32 - 3);
    let sum: f64 = chain.iter().sum();
    let mut items = vec![("kernel_l1".to_string(), s)];
    items.extend(chain.iter().enumerate().map(|(j, f)| (format!("factor_{}", j + 1), *f)));
    items.push((format!("K({k},{n})"), kb));
    items.push((format!("K(0,{n})^{}", d - 3), inner));
    Ok(BoundReport::new("pipeline", sum * kb * inner, "band splitting with certified kernel and K(m,n) bounds", items))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CdnRow {
    pub d: usize,
    pub n: u32,
    pub bounds: Vec<BoundReport>,
    /// Name of the smallest bound.
    pub best: String,
}

impl CdnRow {
    pub fn get(&self, name: &str) -> Option<&BoundReport> {
        self.bounds.iter().find(|b| b.name == name)
    }
}

/// Trivial, Dixon and pipeline bounds on `C(d, n)`; values are at least 1.
pub fn cdn_bounds(d: usize, n: u32) -> Result<CdnRow> {
    if d == 0 || n == 0 {
        return invalid("cdn bounds need d ≥ 1 and n ≥ 1");
    }
    let ln_dim = polynomial::ln_homogeneous_dim(d as u64, n as u64);
    let trivial = BoundReport::from_ln(
        "trivial",
        0.5 * ln_dim,
        "Cauchy-Schwarz over C(d+n, d) coefficients",
        vec![("ln_C(d+n,d)".into(), ln_dim)],
    );
    let nf = n as f64;
    let ln_dixon =
        GROTHENDIECK_BOUND.ln() + 0.5 * (nf - 2.0) * (3.0 * d as f64).ln() + nf * (2.0 * std::f64::consts::E).ln();
    let dixon = BoundReport::from_ln(
        "dixon",
        ln_dixon.max(0.0),
        "Dixon's estimate G_C (3d)^{(n-2)/2} (2e)^n with G_C = 3/2, floored at 1",
        vec![("ln_raw".into(), ln_dixon)],
    );
    let pipeline = pipeline_bound(d, n)?;
    let bounds = vec![trivial, dixon, pipeline];
    let best =
        bounds.iter().min_by(|a, b| a.ln_value.total_cmp(&b.ln_value)).map(|b| b.name.clone()).unwrap_or_default();
    Ok(CdnRow { d, n, bounds, best })
}

/// `‖z_3^m p‖_SA ≤ √((m+n+1)/(m+1)) ‖p‖_∞` with `n` the degree of `p` in `z_3`.
pub fn monomial_shift_bound(p: &MultiPoly, m: u32) -> Result<BoundReport> {
    if p.dim() != 3 {
        return Err(VniError::DimensionMismatch("monomial_shift_bound expects three variables".into()));
    }
    let n3 = p.axis_degrees()[2];
    let k = (((m + n3 + 1) as f64) / ((m + 1) as f64)).sqrt();
    let s = sup_norm_default(p)?.certified_upper;
    Ok(BoundReport::new(
        "monomial_shift",
        k * s,
        "K(m, m+n) ≤ √((m+n+1)/(m+1))",
        vec![(format!("K({m},{})", m + n3), k), ("sup_p".into(), s)],
    ))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BesovDBound {
    /// `‖f‖_d = |f(0)| + ∫₀¹ ‖∂_r f(r·)‖_∞ log(1/(1-r))^{d-3} dr`.
    pub besov_norm: f64,
    /// `Σ_n` certified Schur–Agler bounds of `f * W_n`.
    pub dyadic_bound: f64,
    pub pieces: Vec<(u32, f64)>,
    /// `dyadic_bound / besov_norm`.
    pub constant: f64,
}

pub fn besov_d_bound(f: &MultiPoly, quad: usize) -> Result<BesovDBound> {
    let d = f.dim();
    if d < 3 {
        return invalid(format!("besov_d_bound needs d ≥ 3, got {d}"));
    }
    let besov_norm = besov::integral_besov(f, (d - 3) as f64, quad)?;
    let top = *kernels::dyadic_range(f.degree() as u64).end() + 1;
    let mut pieces = Vec::new();
    for n in 0..=top {
        let piece = besov::dyadic_piece(f, n)?;
        if piece.is_zero() {
            continue;
        }
        let b = sa_upper_band(&piece)?;
        let abs = b.items.iter().find(|(k, _)| k == "absolute").map(|(_, v)| *v).unwrap_or(f64::INFINITY);
        pieces.push((n, abs));
    }
    let dyadic_bound = pieces.iter().map(|p| p.1).sum();
    let constant = if besov_norm == 0.0 { 0.0 } else { dyadic_bound / besov_norm };
    Ok(BesovDBound { besov_norm, dyadic_bound, pieces, constant })
}

#[derive(Clone, Debug)]
pub struct GalleryEntry {
    pub name: String,
    pub poly: MultiPoly,
    pub tuple: MatTuple,
    pub op_norm: f64,
    /// Closed-form value of `‖p(T)‖` where one is known.
    pub exact_op_norm: Option<f64>,
    pub sup: SupNormEstimate,
    /// `‖p(T)‖` over the certified `‖p‖_∞`.
    pub ratio: f64,
    pub max_commutator: f64,
    pub max_contraction: f64,
}

/// Grid used for the gallery sup norms.
pub const GALLERY_GRID: usize = 1024;

/// `z₁² + z₂² + z₃² - 2z₁z₂ - 2z₁z₃ - 2z₂z₃`.
pub fn kaijser_varopoulos_poly() -> MultiPoly {
    let terms =
        [([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 2], 1.0), ([1, 1, 0], -2.0), ([1, 0, 1], -2.0), ([0, 1, 1], -2.0)];
    MultiPoly::from_terms(3, terms.iter().map(|(a, c)| (a.to_vec(), cx(*c, 0.0)))).expect("fixed polynomial")
}

/// `T_i e_0 = e_i`, `T_i e_j = a_ij/√3 e_4` (`a_ii = 1`, `a_ij = -1`), `T_i e_4 = 0`.
pub fn kaijser_varopoulos_tuple() -> Vec<Mat> {
    let s = 1.0 / 3f64.sqrt();
    (1..=3)
        .map(|i| {
            let mut t = linalg::zeros(5, 5);
            t[(i, 0)] = cx(1.0, 0.0);
            for j in 1..=3 {
                t[(4, j)] = cx(if i == j { s } else { -s }, 0.0);
            }
            t
        })
        .collect()
}

pub fn counterexample_gallery() -> Result<Vec<GalleryEntry>> {
    let p = kaijser_varopoulos_poly();
    let mats = kaijser_varopoulos_tuple();
    let max_contraction = mats.iter().map(operator_norm).collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
    let tuple = MatTuple::new(mats, 1e-12, 0.0)?;
    let max_commutator = tuple.max_commutator()?.0;
    let value = eval_poly_tuple(&p, &tuple)?.value;
    let exact = 3.0 * 3f64.sqrt();
    // p(T) = 3√3 E_{4,0}
    let mut expected = linalg::zeros(5, 5);
    expected[(4, 0)] = cx(exact, 0.0);
    let dev = linalg::max_abs_entry(&(&value - expected));
    if dev > 1e-12 {
        return Err(VniError::ToleranceViolated(format!("gallery p(T) deviates from 3√3 E_40 by {dev}")));
    }
    let op_norm = operator_norm(&value)?;
    let sup = sup_norm(&p, GALLERY_GRID)?;
    Ok(vec![GalleryEntry {
        name: "kaijser-varopoulos".into(),
        poly: p,
        tuple,
        op_norm,
        exact_op_norm: Some(exact),
        sup,
        ratio: op_norm / sup.certified_upper,
        max_commutator,
        max_contraction,
    }])
}

/// Homogeneous polynomial of degree `n` in `d` variables with every monomial
/// present and standard complex Gaussian coefficients.
pub fn random_homogeneous(d: usize, n: u32, seed: u64) -> Result<MultiPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = Vec::new();
    let mut alpha = vec![0u32; d];
    compositions(n, 0, &mut alpha, &mut |a| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        terms.push((a.to_vec(), Complex64::new(re, im)));
    });
    MultiPoly::from_terms(d, terms)
}

/// Every monomial of total degree at most `max_degree` with standard complex
/// Gaussian coefficients scaled by `1/√(terms)`.
pub fn random_dense(d: usize, max_degree: u32, seed: u64) -> Result<MultiPoly> {
    if d == 0 {
        return invalid("random polynomial needs d ≥ 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = Vec::new();
    let mut alpha = vec![0u32; d];
    for n in 0..=max_degree {
        compositions(n, 0, &mut alpha, &mut |a| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            terms.push((a.to_vec(), Complex64::new(re, im)));
        });
    }
    let s = 1.0 / (terms.len() as f64).sqrt();
    MultiPoly::from_terms(d, terms.into_iter().map(|(a, c)| (a, c * s)))
}

fn compositions(rest: u32, j: usize, alpha: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if j + 1 == alpha.len() {
        alpha[j] = rest;
        f(alpha);
        return;
    }
    for a in 0..=rest {
        alpha[j] = a;
        compositions(rest - a, j + 1, alpha, f);
    }
}
