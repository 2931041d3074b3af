//! Commuting contractions, operator-coefficient polynomials and the
//! one-variable estimates that need no Hankel machinery.
//!
//! Tuple evaluation order is fixed: for a multi-index `α` the product is
//! `T_1^{α_1} T_2^{α_2} ⋯ T_d^{α_d}` with axis 1 leftmost.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, VniError};
use crate::linalg::{self, cx, identity, operator_norm, Mat, MatJson};
use crate::polynomial::sup::certificate_factor;
use crate::polynomial::{MultiPoly, SupNormEstimate};

pub const DEFAULT_CONTRACTION_TOL: f64 = 1e-12;
pub const DEFAULT_COMMUTE_TOL: f64 = 1e-12;

/// A `d`-tuple of square matrices of one size that commute and are
/// contractions, both up to the stored tolerances.
#[derive(Clone, Debug)]
pub struct MatTuple {
    mats: Vec<Mat>,
    contraction_tol: f64,
    commute_tol: f64,
}

impl MatTuple {
    pub fn new(mats: Vec<Mat>, contraction_tol: f64, commute_tol: f64) -> Result<Self> {
        let t = Self::unchecked(mats, contraction_tol, commute_tol)?;
        for (j, m) in t.mats.iter().enumerate() {
            let nrm = operator_norm(m)?;
            if nrm > 1.0 + contraction_tol {
                return Err(VniError::ToleranceViolated(format!("T_{} has norm {nrm} > 1 + {contraction_tol}", j + 1)));
            }
        }
        let (worst, pair) = t.max_commutator()?;
        if worst > commute_tol {
            return Err(VniError::ToleranceViolated(format!(
                "‖T_{}T_{} - T_{}T_{}‖ = {worst} exceeds {commute_tol}",
                pair.0 + 1,
                pair.1 + 1,
                pair.1 + 1,
                pair.0 + 1
            )));
        }
        Ok(t)
    }

    /// Shape checks only.
    fn unchecked(mats: Vec<Mat>, contraction_tol: f64, commute_tol: f64) -> Result<Self> {
        if mats.is_empty() {
            return invalid("a tuple needs at least one operator");
        }
        let n = mats[0].nrows();
        if mats.iter().any(|m| m.nrows() != n || m.ncols() != n) {
            return Err(VniError::DimensionMismatch("tuple matrices must be square of equal size".into()));
        }
        if n > linalg::MAX_DIM {
            return Err(VniError::TooLarge { dim: n, cap: linalg::MAX_DIM });
        }
        if !(contraction_tol >= 0.0 && commute_tol >= 0.0) {
            return invalid("tolerances must be non-negative");
        }
        Ok(MatTuple { mats, contraction_tol, commute_tol })
    }

    pub fn with_default_tols(mats: Vec<Mat>) -> Result<Self> {
        Self::new(mats, DEFAULT_CONTRACTION_TOL, DEFAULT_COMMUTE_TOL)
    }

    pub fn d(&self) -> usize {
        self.mats.len()
    }

    pub fn size(&self) -> usize {
        self.mats[0].nrows()
    }

    pub fn mats(&self) -> &[Mat] {
        &self.mats
    }

    pub fn get(&self, j: usize) -> &Mat {
        &self.mats[j]
    }

    pub fn contraction_tol(&self) -> f64 {
        self.contraction_tol
    }

    pub fn commute_tol(&self) -> f64 {
        self.commute_tol
    }

    /// Largest pairwise commutator norm and the pair attaining it.
    pub fn max_commutator(&self) -> Result<(f64, (usize, usize))> {
        let mut worst = (0.0, (0, 0));
        for i in 0..self.d() {
            for j in i + 1..self.d() {
                let c = linalg::commutator_norm(&self.mats[i], &self.mats[j])?;
                if c > worst.0 {
                    worst = (c, (i, j));
                }
            }
        }
        Ok(worst)
    }

    pub fn to_json(&self) -> Vec<MatJson> {
        self.mats.iter().map(MatJson::from_mat).collect()
    }

    pub fn from_json(v: &[MatJson], contraction_tol: f64, commute_tol: f64) -> Result<Self> {
        let mats = v.iter().map(MatJson::to_mat).collect::<Result<Vec<_>>>()?;
        Self::new(mats, contraction_tol, commute_tol)
    }
}

/// `p(z) = Σ_{k=m}^{n} A_k z^k` with square matrix coefficients.
#[derive(Clone, Debug)]
pub struct OpPoly {
    low: usize,
    coeffs: Vec<Mat>,
}

impl OpPoly {
    /// `coeffs[i]` is `A_{low + i}`.
    pub fn new(low: usize, coeffs: Vec<Mat>) -> Result<Self> {
        if coeffs.is_empty() {
            return invalid("an operator polynomial needs at least one coefficient");
        }
        let n = coeffs[0].nrows();
        if coeffs.iter().any(|a| a.nrows() != n || a.ncols() != n) {
            return Err(VniError::DimensionMismatch("coefficients must be square of equal size".into()));
        }
        Ok(OpPoly { low, coeffs })
    }

    pub fn from_scalar(low: usize, c: &[Complex64], size: usize) -> Result<Self> {
        Self::new(low, c.iter().map(|&z| identity(size) * z).collect())
    }

    pub fn band(&self) -> (usize, usize) {
        (self.low, self.low + self.coeffs.len() - 1)
    }

    pub fn size(&self) -> usize {
        self.coeffs[0].nrows()
    }

    pub fn coeffs(&self) -> &[Mat] {
        &self.coeffs
    }

    pub fn eval_scalar(&self, z: Complex64) -> Mat {
        let mut acc = self.coeffs.last().unwrap().clone();
        for a in self.coeffs.iter().rev().skip(1) {
            acc = acc * z + a;
        }
        acc * z.powu(self.low as u32)
    }

    /// `sup_{|z|=1} ‖p(z)‖` from `points` equispaced samples. The certificate
    /// applies the scalar argument to `t ↦ ⟨p(e^{it})x, y⟩` for the extremal
    /// unit vectors, a trigonometric polynomial of bandwidth `n - m`.
    pub fn circle_sup_norm(&self, points: usize) -> Result<SupNormEstimate> {
        let (m, n) = self.band();
        if points < 4 * (n - m + 1) {
            return invalid(format!("{points} circle points are too few for band ({m}, {n})"));
        }
        let mut grid_max = 0.0f64;
        for k in 0..points {
            let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / points as f64);
            grid_max = grid_max.max(operator_norm(&self.eval_scalar(z))?);
        }
        let certified = match certificate_factor(&[n - m], points) {
            Some(f) if n > m => grid_max * f,
            Some(_) => grid_max,
            None => f64::INFINITY,
        };
        Ok(SupNormEstimate { grid_max, certified_upper: certified, grid_points_per_axis: points })
    }
}

/// `Σ A_k T^k`, Horner with coefficients kept on the left.
pub fn eval_oppoly(p: &OpPoly, t: &Mat) -> Result<Mat> {
    if t.nrows() != p.size() || t.ncols() != p.size() {
        return Err(VniError::DimensionMismatch(format!(
            "operator is {}x{}, coefficients are {}x{}",
            t.nrows(),
            t.ncols(),
            p.size(),
            p.size()
        )));
    }
    let mut acc = p.coeffs.last().unwrap().clone();
    for a in p.coeffs.iter().rev().skip(1) {
        acc = acc * t + a;
    }
    for _ in 0..p.low {
        acc *= t;
    }
    Ok(acc)
}

/// The operator polynomial `Σ_{k=m}^n E_{0,k} z^k` with the truncated shift,
/// for which `‖p(T)‖ = n - m + 1` and `sup ‖p(z)‖ = √(n - m + 1)`.
#[derive(Clone, Debug)]
pub struct SqrtBandWitness {
    pub poly: OpPoly,
    pub shift: Mat,
    pub op_norm: f64,
    pub sup_norm: f64,
    pub ratio: f64,
}

pub fn sqrt_band_witness(m: usize, n: usize, dim: usize) -> Result<SqrtBandWitness> {
    if m > n {
        return invalid(format!("band ({m}, {n}) needs m ≤ n"));
    }
    if dim < n + 2 {
        return invalid(format!("dimension {dim} is below n + 2 = {}", n + 2));
    }
    let coeffs = (m..=n).map(|k| linalg::matrix_unit(dim, 0, k)).collect();
    let poly = OpPoly::new(m, coeffs)?;
    let shift = linalg::shift(dim);
    let op_norm = operator_norm(&eval_oppoly(&poly, &shift)?)?;
    // ‖p(z)‖ is the same at every point of the circle
    let sup = poly.circle_sup_norm((4 * (n - m + 1)).max(16))?.grid_max;
    Ok(SqrtBandWitness { poly, shift, op_norm, sup_norm: sup, ratio: op_norm / sup })
}

/// `(I - zT*)^{-1} + (I - z̄T)^{-1} - I`.
pub fn poisson_kernel(z: Complex64, t: &Mat) -> Result<Mat> {
    if t.nrows() != t.ncols() {
        return Err(VniError::DimensionMismatch("T must be square".into()));
    }
    if z.norm() > 1.0 {
        return invalid(format!("|z| = {} exceeds 1", z.norm()));
    }
    let nrm = operator_norm(t)?;
    if nrm >= 1.0 {
        return invalid(format!("‖T‖ = {nrm} must be < 1"));
    }
    let id = identity(t.nrows());
    let a = linalg::inverse(&(&id - t.adjoint() * z))?;
    let b = linalg::inverse(&(&id - t * z.conj()))?;
    Ok(a + b - id)
}

/// Ratio `‖p(T)‖ / sup_{|z|=1} ‖p(z)‖`, the denominator being the certified
/// circle bound. `T` must commute with every `A_k` and `A_k*`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DoublyCommutingReport {
    pub op_norm: f64,
    pub sup_norm: SupNormEstimate,
    pub ratio: f64,
}

pub fn verify_doubly_commuting(p: &OpPoly, t: &Mat, commute_tol: f64) -> Result<DoublyCommutingReport> {
    let pt = eval_oppoly(p, t)?;
    let tn = operator_norm(t)?;
    if tn > 1.0 + DEFAULT_CONTRACTION_TOL {
        return invalid(format!("‖T‖ = {tn} exceeds 1"));
    }
    for (i, a) in p.coeffs.iter().enumerate() {
        let k = p.low + i;
        let c1 = linalg::commutator_norm(a, t)?;
        let c2 = linalg::commutator_norm(&a.adjoint(), t)?;
        if c1.max(c2) > commute_tol {
            return Err(VniError::ToleranceViolated(format!(
                "T fails to doubly commute with A_{k}: ‖[A,T]‖ = {c1}, ‖[A*,T]‖ = {c2}"
            )));
        }
    }
    let (m, n) = p.band();
    let points = (64 * (n - m + 1)).max(256);
    let sup = p.circle_sup_norm(points)?;
    let op_norm = operator_norm(&pt)?;
    let ratio = if sup.certified_upper == 0.0 { 0.0 } else { op_norm / sup.certified_upper };
    Ok(DoublyCommutingReport { op_norm, sup_norm: sup, ratio })
}

/// Returns `(lhs, rhs)` with `lhs = ‖Σ w_i K_i f_i L_i‖` and
/// `rhs = ‖Σ w_i K_i K_i*‖^{1/2} ‖Σ w_i L_i* L_i‖^{1/2} max ‖f_i‖`.
pub fn cs_integral_check(k: &[Mat], l: &[Mat], f: &[Mat], weights: &[f64]) -> Result<(f64, f64)> {
    let n = weights.len();
    if n == 0 || k.len() != n || l.len() != n || f.len() != n {
        return Err(VniError::DimensionMismatch("sample lists must be non-empty and of equal length".into()));
    }
    if weights.iter().any(|w| w.is_nan() || *w < 0.0) {
        return invalid("weights must be non-negative");
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return invalid(format!("weights sum to {total}, not 1"));
    }
    let (r, c) = (k[0].nrows(), l[0].ncols());
    let mut sum = linalg::zeros(r, c);
    let mut kk = linalg::zeros(r, r);
    let mut ll = linalg::zeros(c, c);
    let mut fmax = 0.0f64;
    for i in 0..n {
        if k[i].ncols() != f[i].nrows() || f[i].ncols() != l[i].nrows() || k[i].nrows() != r || l[i].ncols() != c {
            return Err(VniError::DimensionMismatch(format!("sample {i} has incompatible shapes")));
        }
        let w = cx(weights[i], 0.0);
        sum += (&k[i] * &f[i] * &l[i]) * w;
        kk += (&k[i] * k[i].adjoint()) * w;
        ll += (l[i].adjoint() * &l[i]) * w;
        fmax = fmax.max(operator_norm(&f[i])?);
    }
    let lhs = operator_norm(&sum)?;
    let rhs = operator_norm(&kk)?.sqrt() * operator_norm(&ll)?.sqrt() * fmax;
    Ok((lhs, rhs))
}

/// `p(T)` together with the bound `Σ |p̂(α)| · commute_tol · deg²` on how much
/// the value can depend on the order of the factors.
#[derive(Clone, Debug)]
pub struct TupleEval {
    pub value: Mat,
    pub commutator_uncertainty: f64,
}

pub fn eval_poly_tuple(p: &MultiPoly, t: &MatTuple) -> Result<TupleEval> {
    if p.dim() != t.d() {
        return Err(VniError::DimensionMismatch(format!(
            "polynomial has {} variables, tuple has {} operators",
            p.dim(),
            t.d()
        )));
    }
    let size = t.size();
    let top = p.axis_degrees();
    let powers: Vec<Vec<Mat>> = t
        .mats
        .iter()
        .zip(&top)
        .map(|(m, &e)| {
            let mut v = vec![identity(size)];
            for k in 1..=e as usize {
                let next = &v[k - 1] * m;
                v.push(next);
            }
            v
        })
        .collect();
    let mut value = linalg::zeros(size, size);
    for (alpha, c) in p.terms() {
        let mut prod: Option<Mat> = None;
        for (j, &e) in alpha.entries().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let f = &powers[j][e as usize];
            prod = Some(match prod {
                None => f.clone(),
                Some(acc) => acc * f,
            });
        }
        match prod {
            None => {
                for i in 0..size {
                    value[(i, i)] += c;
                }
            }
            Some(m) => value += m * *c,
        }
    }
    let deg = p.degree() as f64;
    let commutator_uncertainty = p.coeff_l1() * t.commute_tol * deg * deg;
    Ok(TupleEval { value, commutator_uncertainty })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TupleScheme {
    SingleGenerator,
    DirectSum,
    Diagonal,
}

impl std::str::FromStr for TupleScheme {
    type Err = VniError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single-generator" => Ok(TupleScheme::SingleGenerator),
            "direct-sum" => Ok(TupleScheme::DirectSum),
            "diagonal" => Ok(TupleScheme::Diagonal),
            _ => invalid(format!("unknown scheme {s:?}")),
        }
    }
}

/// Exactly commuting random contractions.
pub fn random_commuting_tuple(d: usize, size: usize, seed: u64, scheme: TupleScheme) -> Result<MatTuple> {
    if d == 0 || size == 0 {
        return invalid("d and size must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mats = generate(d, size, scheme, &mut rng)?;
    MatTuple::new(mats, DEFAULT_CONTRACTION_TOL, DEFAULT_COMMUTE_TOL)
}

fn generate<R: Rng>(d: usize, size: usize, scheme: TupleScheme, rng: &mut R) -> Result<Vec<Mat>> {
    match scheme {
        TupleScheme::Diagonal => Ok((0..d)
            .map(|_| {
                let mut m = linalg::zeros(size, size);
                for i in 0..size {
                    let r = rng.random::<f64>().sqrt();
                    let th = rng.random::<f64>() * std::f64::consts::TAU;
                    m[(i, i)] = Complex64::from_polar(r, th);
                }
                m
            })
            .collect()),
        TupleScheme::SingleGenerator => {
            let s = linalg::random_contraction(size, 1.0, rng);
            let mut out = Vec::with_capacity(d);
            for _ in 0..d {
                let deg = rng.random_range(1..=3usize);
                let c: Vec<Complex64> =
                    (0..=deg).map(|_| cx(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
                let q = OpPoly::from_scalar(0, &c, size)?;
                let qs = eval_oppoly(&q, &s)?;
                let nrm = operator_norm(&qs)?;
                let scale = if nrm > 0.0 { rng.random_range(0.5..=1.0) / nrm } else { 0.0 };
                out.push(qs * cx(scale, 0.0));
            }
            Ok(out)
        }
        TupleScheme::DirectSum => {
            if size == 1 {
                return generate(d, 1, TupleScheme::Diagonal, rng);
            }
            let a = size / 2;
            let first = generate(d, a, TupleScheme::SingleGenerator, rng)?;
            let second = generate(d, size - a, TupleScheme::Diagonal, rng)?;
            Ok(first
                .into_iter()
                .zip(second)
                .map(|(x, y)| {
                    let mut m = linalg::zeros(size, size);
                    m.view_mut((0, 0), (a, a)).copy_from(&x);
                    m.view_mut((a, a), (size - a, size - a)).copy_from(&y);
                    m
                })
                .collect())
        }
    }
}

/// `max_{0 ≤ k ≤ max_power} ‖T^k‖`, a power-boundedness diagnostic.
pub fn power_bound(t: &Mat, max_power: usize) -> Result<f64> {
    if t.nrows() != t.ncols() {
        return Err(VniError::DimensionMismatch("T must be square".into()));
    }
    let mut best = if t.nrows() == 0 { 0.0 } else { 1.0 };
    let mut p = identity(t.nrows());
    for _ in 0..max_power {
        p = &p * t;
        best = f64::max(best, operator_norm(&p)?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::sup_norm;

    #[test]
    fn sqrt_band_examples() {
        assert!((sqrt_band_witness(0, 0, 2).unwrap().ratio - 1.0).abs() < 1e-9);
        let w = sqrt_band_witness(1, 3, 8).unwrap();
        assert!((w.ratio - 3f64.sqrt()).abs() < 1e-9);
        assert!((w.op_norm - 3.0).abs() < 1e-9);
        assert!((sqrt_band_witness(0, 3, 8).unwrap().ratio - 2.0).abs() < 1e-9);
        assert!(sqrt_band_witness(0, 3, 4).is_err());
    }

    #[test]
    fn oppoly_with_identity_coefficients_is_scalar_polynomial() {
        let t = linalg::random_contraction(4, 0.8, &mut ChaCha8Rng::seed_from_u64(1));
        let c = [cx(1.0, 0.0), cx(0.0, 2.0), cx(-0.5, 0.0)];
        let p = OpPoly::from_scalar(1, &c, 4).unwrap();
        let direct = &t * c[0] + &t * &t * c[1] + &t * &t * &t * c[2];
        assert!(linalg::max_abs_entry(&(eval_oppoly(&p, &t).unwrap() - direct)) < 1e-13);
        let one = OpPoly::new(0, vec![identity(4)]).unwrap();
        assert_eq!(eval_oppoly(&one, &t).unwrap(), identity(4));
        assert!(eval_oppoly(&p, &identity(3)).is_err());
    }

    #[test]
    fn poisson_kernel_examples() {
        let z = linalg::zeros(3, 3);
        let p = poisson_kernel(cx(0.3, 0.4), &z).unwrap();
        assert!(linalg::max_abs_entry(&(p - identity(3))) < 1e-15);
        let r = 0.6;
        let p = poisson_kernel(cx(1.0, 0.0), &(identity(2) * cx(r, 0.0))).unwrap();
        assert!((p[(0, 0)].re - (1.0 + r) / (1.0 - r)).abs() < 1e-12);
        assert!(poisson_kernel(cx(1.0, 0.0), &identity(2)).is_err());
    }

    #[test]
    fn random_tuples_commute() {
        for scheme in [TupleScheme::Diagonal, TupleScheme::SingleGenerator, TupleScheme::DirectSum] {
            let t = random_commuting_tuple(3, 6, 11, scheme).unwrap();
            let (c, _) = t.max_commutator().unwrap();
            assert!(c <= 1e-12, "{scheme:?}: {c}");
            if scheme == TupleScheme::Diagonal {
                assert_eq!(c, 0.0);
            }
        }
    }

    #[test]
    fn tuple_rejects_non_commuting_pairs() {
        let a = linalg::shift(3);
        let b = a.adjoint();
        let err = MatTuple::with_default_tols(vec![a, b]).unwrap_err();
        assert!(matches!(err, VniError::ToleranceViolated(_)));
        let big = identity(2) * cx(2.0, 0.0);
        assert!(MatTuple::with_default_tols(vec![big]).is_err());
    }

    #[test]
    fn tuple_evaluation_of_coordinates() {
        let t = random_commuting_tuple(2, 5, 3, TupleScheme::SingleGenerator).unwrap();
        let z2 = MultiPoly::variable(2, 1).unwrap();
        let v = eval_poly_tuple(&z2, &t).unwrap();
        assert!(linalg::max_abs_entry(&(v.value - t.get(1))) < 1e-15);
        let one = MultiPoly::constant(1, cx(2.0, -1.0)).unwrap();
        let s = MatTuple::with_default_tols(vec![identity(1) * cx(0.5, 0.0)]).unwrap();
        assert_eq!(eval_poly_tuple(&one, &s).unwrap().value[(0, 0)], cx(2.0, -1.0));
    }

    #[test]
    fn von_neumann_for_single_contractions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..5 {
            let t = random_commuting_tuple(1, 6, 100 + trial, TupleScheme::SingleGenerator).unwrap();
            let c: Vec<(Vec<u32>, Complex64)> =
                (0..12).map(|k| (vec![k], cx(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))).collect();
            let p = MultiPoly::from_terms(1, c).unwrap();
            let v = operator_norm(&eval_poly_tuple(&p, &t).unwrap().value).unwrap();
            let s = sup_norm(&p, 512).unwrap();
            assert!(v <= s.certified_upper * (1.0 + 1e-9), "{v} > {}", s.certified_upper);
        }
    }

    #[test]
    fn doubly_commuting_with_tensor_split() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = linalg::random_contraction(3, 1.0, &mut rng);
        let id2 = identity(2);
        let t = linalg::kron(&id2, &s);
        let coeffs: Vec<Mat> =
            (0..4).map(|_| linalg::kron(&linalg::random_gaussian(2, 2, &mut rng), &identity(3))).collect();
        let p = OpPoly::new(0, coeffs).unwrap();
        let r = verify_doubly_commuting(&p, &t, 1e-10).unwrap();
        assert!(r.ratio <= 1.0 + 1e-6, "{}", r.ratio);
        let bad = OpPoly::new(0, vec![linalg::shift(6)]).unwrap();
        assert!(verify_doubly_commuting(&bad, &t, 1e-10).is_err());
    }

    #[test]
    fn cs_check_trivial_cases() {
        let i = identity(3);
        let (l, r) =
            cs_integral_check(std::slice::from_ref(&i), std::slice::from_ref(&i), std::slice::from_ref(&i), &[1.0])
                .unwrap();
        assert!((l - 1.0).abs() < 1e-12 && (r - 1.0).abs() < 1e-12);
        assert!(cs_integral_check(
            std::slice::from_ref(&i),
            std::slice::from_ref(&i),
            std::slice::from_ref(&i),
            &[0.5]
        )
        .is_err());
    }

    #[test]
    fn power_bound_of_shift() {
        assert!((power_bound(&linalg::shift(4), 6).unwrap() - 1.0).abs() < 1e-12);
        let mut j = identity(2) * cx(0.5, 0.0);
        j[(0, 1)] = cx(3.0, 0.0);
        assert!(power_bound(&j, 4).unwrap() > 3.0);
    }
}
