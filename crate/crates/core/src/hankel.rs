//! Hankel matrices and Foguel–Hankel tuples
//! `T_j = [[r_j S, 0], [H_j, r_j Sᵀ]]` on `ℂ^N ⊕ ℂ^N`.
//!
//! `S` is the truncated forward shift and `H_j[i][k] = conj(q_j[i+k])`. Once
//! `N` exceeds every symbol degree, `H S = Sᵀ H` holds exactly in the
//! truncation and `span(e_0..e_{N-1}) ⊕ span(e_0..e_{N-1})` is semi-invariant
//! for the infinite tuple, so `p(T)` computed here is the exact compression of
//! the infinite `p(T)` for every polynomial `p`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, VniError};
use crate::linalg::{self, cx, operator_norm, Mat};
use crate::operators::{eval_poly_tuple, MatTuple};
use crate::polynomial::{sup_norm_default, MultiPoly, SupNormEstimate};

const CRITERION_TOL: f64 = 1e-9;
const COMMUTE_TOL: f64 = 1e-9;

/// Polynomial symbol `Σ c_k z^k` and a truncation size.
#[derive(Clone, Debug, PartialEq)]
pub struct HankelSpec {
    pub symbol: Vec<Complex64>,
    pub trunc: usize,
}

impl HankelSpec {
    pub fn new(symbol: Vec<Complex64>, trunc: usize) -> Result<Self> {
        if trunc < symbol.len() {
            return invalid(format!("trunc = {trunc} is below the symbol length {}", symbol.len()));
        }
        if symbol.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(VniError::NonFinite("symbol coefficient".into()));
        }
        Ok(HankelSpec { symbol, trunc })
    }

    /// Index of the last non-zero coefficient (0 for the zero symbol).
    pub fn degree(&self) -> usize {
        self.symbol.iter().rposition(|c| *c != Complex64::new(0.0, 0.0)).unwrap_or(0)
    }
}

pub fn hankel_matrix(spec: &HankelSpec) -> Mat {
    let n = spec.trunc;
    Mat::from_fn(n, n, |i, j| spec.symbol.get(i + j).map(|c| c.conj()).unwrap_or(cx(0.0, 0.0)))
}

/// `r² + ‖H‖ ≤ 1` (up to `1e-9`).
pub fn two_by_two_criterion(r: f64, h: &Mat) -> Result<bool> {
    if !(0.0..=1.0).contains(&r) {
        return invalid(format!("r = {r} is outside [0, 1]"));
    }
    Ok(r * r + operator_norm(h)? <= 1.0 + CRITERION_TOL)
}

/// `[[r S, 0], [H, r Sᵀ]]` with `S` the truncated shift of the size of `H`.
pub fn assemble_block(r: f64, h: &Mat) -> Mat {
    let n = h.nrows();
    let s = linalg::shift(n) * cx(r, 0.0);
    let mut t = linalg::zeros(2 * n, 2 * n);
    t.view_mut((0, 0), (n, n)).copy_from(&s);
    t.view_mut((n, 0), (n, n)).copy_from(h);
    t.view_mut((n, n), (n, n)).copy_from(&s.transpose());
    t
}

#[derive(Clone, Debug)]
pub struct FoguelTuple {
    symbols: Vec<HankelSpec>,
    radii: Vec<f64>,
    trunc: usize,
    exactness_degree: usize,
    hankels: Vec<Mat>,
    tuple: MatTuple,
    full_commutator: f64,
}

/// Smallest truncation for which polynomials of degree `deg_p` stay inside
/// the exactness window.
pub fn recommended_trunc(deg_p: usize, max_symbol_degree: usize) -> usize {
    2 * deg_p + max_symbol_degree + 2
}

pub fn foguel_tuple(symbols: &[Vec<Complex64>], radii: &[f64], trunc: usize) -> Result<FoguelTuple> {
    if symbols.is_empty() || symbols.len() != radii.len() {
        return Err(VniError::DimensionMismatch(format!("{} symbols and {} radii", symbols.len(), radii.len())));
    }
    let specs = symbols.iter().map(|s| HankelSpec::new(s.clone(), trunc)).collect::<Result<Vec<_>>>()?;
    let max_deg = specs.iter().map(HankelSpec::degree).max().unwrap_or(0);
    if trunc < max_deg + 2 {
        return invalid(format!("trunc = {trunc} must be at least max symbol degree + 2 = {}", max_deg + 2));
    }
    let mut hankels = Vec::with_capacity(specs.len());
    let mut mats = Vec::with_capacity(specs.len());
    for (j, (spec, &r)) in specs.iter().zip(radii).enumerate() {
        let h = hankel_matrix(spec);
        if !two_by_two_criterion(r, &h)? {
            return Err(VniError::ToleranceViolated(format!(
                "T_{} is not a contraction: r² + ‖H‖ = {} > 1",
                j + 1,
                r * r + operator_norm(&h)?
            )));
        }
        mats.push(assemble_block(r, &h));
        hankels.push(h);
    }
    let tuple = MatTuple::new(mats, CRITERION_TOL, COMMUTE_TOL)?;
    let full_commutator = tuple.max_commutator()?.0;
    Ok(FoguelTuple {
        symbols: specs,
        radii: radii.to_vec(),
        trunc,
        exactness_degree: trunc - max_deg - 1,
        hankels,
        tuple,
        full_commutator,
    })
}

impl FoguelTuple {
    pub fn d(&self) -> usize {
        self.radii.len()
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn symbols(&self) -> &[HankelSpec] {
        &self.symbols
    }

    pub fn exactness_degree(&self) -> usize {
        self.exactness_degree
    }

    pub fn hankels(&self) -> &[Mat] {
        &self.hankels
    }

    pub fn as_tuple(&self) -> &MatTuple {
        &self.tuple
    }

    /// Largest pairwise commutator over the whole truncation.
    pub fn full_commutator(&self) -> f64 {
        self.full_commutator
    }

    /// Largest pairwise commutator compressed to the exactness window.
    pub fn window_commutator(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        let m = self.tuple.mats();
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                let c = &m[i] * &m[j] - &m[j] * &m[i];
                worst = worst.max(operator_norm(&self.window(&c))?);
            }
        }
        Ok(worst)
    }

    /// Compression of a `2N × 2N` matrix to coordinates `< exactness_degree`
    /// in each summand.
    pub fn window(&self, m: &Mat) -> Mat {
        let n = self.trunc;
        let w = self.exactness_degree;
        let idx: Vec<usize> = (0..w).chain(n..n + w).collect();
        Mat::from_fn(idx.len(), idx.len(), |a, b| m[(idx[a], idx[b])])
    }

    /// `(r_1 S, …, r_d S)` and `(r_1 Sᵀ, …, r_d Sᵀ)`.
    fn diagonal_tuples(&self) -> Result<(MatTuple, MatTuple)> {
        let s = linalg::shift(self.trunc);
        let v = self.radii.iter().map(|&r| &s * cx(r, 0.0)).collect();
        let w = self.radii.iter().map(|&r| s.transpose() * cx(r, 0.0)).collect();
        Ok((MatTuple::with_default_tols(v)?, MatTuple::with_default_tols(w)?))
    }

    /// `Σ_j H_j ∂_j p(r S)`.
    pub fn corner(&self, p: &MultiPoly) -> Result<Mat> {
        self.check_poly(p)?;
        let (v, _) = self.diagonal_tuples()?;
        let mut corner = linalg::zeros(self.trunc, self.trunc);
        for (j, h) in self.hankels.iter().enumerate() {
            let dp = p.partial(j)?;
            if dp.is_zero() {
                continue;
            }
            corner += h * eval_poly_tuple(&dp, &v)?.value;
        }
        Ok(corner)
    }

    fn check_poly(&self, p: &MultiPoly) -> Result<()> {
        if p.dim() != self.d() {
            return Err(VniError::DimensionMismatch(format!(
                "polynomial has {} variables, tuple has {} operators",
                p.dim(),
                self.d()
            )));
        }
        if p.degree() as usize > self.exactness_degree {
            return invalid(format!("degree {} exceeds the exactness window {}", p.degree(), self.exactness_degree));
        }
        Ok(())
    }
}

/// `[[p(rS), 0], [Σ H_j ∂_j p(rS), p(rSᵀ)]]`.
pub fn block_formula_eval(p: &MultiPoly, f: &FoguelTuple) -> Result<Mat> {
    f.check_poly(p)?;
    let n = f.trunc;
    let (v, w) = f.diagonal_tuples()?;
    let mut out = linalg::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(&eval_poly_tuple(p, &v)?.value);
    out.view_mut((n, 0), (n, n)).copy_from(&f.corner(p)?);
    out.view_mut((n, n), (n, n)).copy_from(&eval_poly_tuple(p, &w)?.value);
    Ok(out)
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FoguelReport {
    /// `‖p(T)‖` on the window over the certified `‖p‖_∞`.
    pub ratio: f64,
    /// Same with the whole truncation.
    pub ratio_full: f64,
    /// 1 for equal-shift tuples.
    pub bound: f64,
    /// `‖Σ H_j ∂_j p(rS)‖ / ‖p‖_∞`; at most `d`.
    pub corner_ratio: f64,
    pub sup_norm: SupNormEstimate,
    pub exactness_degree: usize,
    pub window_commutator: f64,
}

pub fn verify_foguel_vn(p: &MultiPoly, f: &FoguelTuple) -> Result<FoguelReport> {
    f.check_poly(p)?;
    let value = eval_poly_tuple(p, &f.tuple)?.value;
    let sup = sup_norm_default(p)?;
    let denom = sup.certified_upper;
    let (ratio, ratio_full, corner_ratio) = if denom == 0.0 {
        (0.0, 0.0, 0.0)
    } else {
        (
            operator_norm(&f.window(&value))? / denom,
            operator_norm(&value)? / denom,
            operator_norm(&f.corner(p)?)? / denom,
        )
    };
    Ok(FoguelReport {
        ratio,
        ratio_full,
        bound: 1.0,
        corner_ratio,
        sup_norm: sup,
        exactness_degree: f.exactness_degree,
        window_commutator: f.window_commutator()?,
    })
}

/// Random valid tuple: `r_j ∈ [0, 0.95]`, symbols of degree `≤ max_symbol_degree`
/// rescaled so that `‖H_j‖ = u (1 - r_j²)` with `u ∈ [0.5, 1]`.
pub fn random_foguel_tuple(d: usize, max_symbol_degree: usize, trunc: usize, seed: u64) -> Result<FoguelTuple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut symbols = Vec::with_capacity(d);
    let mut radii = Vec::with_capacity(d);
    for _ in 0..d {
        let r: f64 = rng.random_range(0.0..=0.95);
        let deg = rng.random_range(0..=max_symbol_degree);
        let raw: Vec<Complex64> = (0..=deg).map(|_| cx(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        let h = hankel_matrix(&HankelSpec::new(raw.clone(), trunc)?);
        let nrm = operator_norm(&h)?;
        let target = rng.random_range(0.5..=1.0) * (1.0 - r * r);
        let scale = if nrm > 0.0 { target / nrm } else { 0.0 };
        symbols.push(raw.into_iter().map(|c| c * scale).collect());
        radii.push(r);
    }
    foguel_tuple(&symbols, &radii, trunc)
}

/// `{"symbols": [[[re, im], ...], ...], "radii": [...], "trunc": N}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoguelJson {
    pub symbols: Vec<Vec<[f64; 2]>>,
    pub radii: Vec<f64>,
    pub trunc: usize,
}

impl FoguelJson {
    pub fn from_tuple(f: &FoguelTuple) -> Self {
        FoguelJson {
            symbols: f.symbols.iter().map(|s| s.symbol.iter().map(|c| [c.re, c.im]).collect()).collect(),
            radii: f.radii.clone(),
            trunc: f.trunc,
        }
    }

    pub fn build(&self) -> Result<FoguelTuple> {
        let symbols: Vec<Vec<Complex64>> =
            self.symbols.iter().map(|s| s.iter().map(|[re, im]| cx(*re, *im)).collect()).collect();
        foguel_tuple(&symbols, &self.radii, self.trunc)
    }
}
