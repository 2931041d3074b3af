//! Sparse polynomials on the polydisc.
//!
//! A [`MultiPoly`] stores only its non-zero coefficients, keyed by [`MultiIndex`].
//! Keys are kept in a `BTreeMap` so iteration order (and therefore every
//! printed report) is deterministic.

mod format;
pub(crate) mod sup;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, VniError};

pub use format::{PolyJson, TermJson};
pub use sup::{default_points_per_axis, sup_norm, sup_norm_default, SupNormEstimate};

/// Exponent vector of a monomial `z^α = z_1^{α_1} ⋯ z_d^{α_d}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return invalid("multi-index must have length >= 1");
        }
        Ok(MultiIndex(entries))
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim.max(1)])
    }

    /// The unit index `e_axis`.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = vec![0; dim.max(1)];
        v[axis] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// `|α|`, the total degree of the monomial.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Entrywise comparison `self ≤ other`.
    pub fn le_entrywise(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl From<&[u32]> for MultiIndex {
    fn from(v: &[u32]) -> Self {
        MultiIndex(v.to_vec())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Polynomial in `d` complex variables with complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    dim: usize,
    coeffs: BTreeMap<MultiIndex, Complex64>,
}

impl MultiPoly {
    /// The zero polynomial in `dim` variables.
    pub fn zero(dim: usize) -> Result<Self> {
        if dim == 0 {
            return invalid("polynomial dimension must be >= 1");
        }
        Ok(MultiPoly { dim, coeffs: BTreeMap::new() })
    }

    pub fn constant(dim: usize, c: Complex64) -> Result<Self> {
        let mut p = Self::zero(dim)?;
        p.add_term(MultiIndex::zero(dim), c)?;
        Ok(p)
    }

    pub fn monomial(alpha: &[u32], c: Complex64) -> Result<Self> {
        let mut p = Self::zero(alpha.len())?;
        p.add_term(MultiIndex::new(alpha.to_vec())?, c)?;
        Ok(p)
    }

    /// The coordinate function `z_axis` (0-based axis).
    pub fn variable(dim: usize, axis: usize) -> Result<Self> {
        if axis >= dim {
            return invalid(format!("axis {axis} out of range for dimension {dim}"));
        }
        let mut p = Self::zero(dim)?;
        p.add_term(MultiIndex::unit(dim, axis), Complex64::new(1.0, 0.0))?;
        Ok(p)
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Complex64)>,
    {
        let mut p = Self::zero(dim)?;
        for (alpha, c) in terms {
            p.add_term(MultiIndex::new(alpha)?, c)?;
        }
        Ok(p)
    }

    /// Adds `c z^α`, pruning the entry if the result is exactly zero.
    pub fn add_term(&mut self, alpha: MultiIndex, c: Complex64) -> Result<()> {
        if alpha.len() != self.dim {
            return Err(VniError::DimensionMismatch(format!(
                "multi-index {alpha} has length {} but polynomial has dimension {}",
                alpha.len(),
                self.dim
            )));
        }
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(VniError::NonFinite(format!("coefficient of {alpha}")));
        }
        let zero = Complex64::new(0.0, 0.0);
        match self.coeffs.entry(alpha) {
            Entry::Vacant(v) => {
                if c != zero {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == zero {
                    o.remove();
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Complex64 {
        self.coeffs.get(alpha).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn coeff_of(&self, alpha: &[u32]) -> Complex64 {
        self.coeffs.get(&MultiIndex(alpha.to_vec())).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.coeffs.iter()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(MultiIndex::total).max().unwrap_or(0)
    }

    /// Largest exponent of each variable.
    pub fn axis_degrees(&self) -> Vec<u32> {
        let mut out = vec![0; self.dim];
        for alpha in self.coeffs.keys() {
            for (o, a) in out.iter_mut().zip(alpha.entries()) {
                *o = (*o).max(*a);
            }
        }
        out
    }

    /// Smallest exponent of each variable (0 for the zero polynomial).
    pub fn axis_low_degrees(&self) -> Vec<u32> {
        if self.is_zero() {
            return vec![0; self.dim];
        }
        let mut out = vec![u32::MAX; self.dim];
        for alpha in self.coeffs.keys() {
            for (o, a) in out.iter_mut().zip(alpha.entries()) {
                *o = (*o).min(*a);
            }
        }
        out
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut totals = self.coeffs.keys().map(MultiIndex::total);
        match totals.next() {
            None => true,
            Some(first) => totals.all(|t| t == first),
        }
    }

    /// Constant term `p(0)`.
    pub fn constant_term(&self) -> Complex64 {
        self.coeff(&MultiIndex::zero(self.dim))
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.dim {
            return Err(VniError::DimensionMismatch(format!(
                "point has {} coordinates, polynomial has dimension {}",
                z.len(),
                self.dim
            )));
        }
        Ok(self
            .coeffs
            .iter()
            .map(|(alpha, c)| alpha.entries().iter().zip(z).fold(*c, |acc, (&a, zj)| acc * zj.powu(a)))
            .sum())
    }

    /// Applies `f(α, c)` to every coefficient, dropping zeros.
    pub fn map_coeffs<F>(&self, mut f: F) -> MultiPoly
    where
        F: FnMut(&MultiIndex, Complex64) -> Complex64,
    {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(alpha, c)| (alpha.clone(), f(alpha, *c)))
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .collect();
        MultiPoly { dim: self.dim, coeffs }
    }

    pub fn scale(&self, s: Complex64) -> MultiPoly {
        self.map_coeffs(|_, c| c * s)
    }

    /// `p_r(z) = p(r z)`.
    pub fn dilate(&self, r: f64) -> MultiPoly {
        self.map_coeffs(|alpha, c| c * r.powi(alpha.total() as i32))
    }

    /// `(Rp)(z) = Σ_j z_j ∂p/∂z_j`, i.e. coefficient `α` scaled by `|α|`.
    pub fn radial_derivative(&self) -> MultiPoly {
        self.map_coeffs(|alpha, c| c * alpha.total() as f64)
    }

    /// `∂p/∂z_axis`.
    pub fn partial(&self, axis: usize) -> Result<MultiPoly> {
        if axis >= self.dim {
            return invalid(format!("axis {axis} out of range for dimension {}", self.dim));
        }
        let mut out = MultiPoly::zero(self.dim)?;
        for (alpha, c) in &self.coeffs {
            let a = alpha.entries()[axis];
            if a == 0 {
                continue;
            }
            let mut beta = alpha.entries().to_vec();
            beta[axis] -= 1;
            out.coeffs.insert(MultiIndex(beta), c * a as f64);
        }
        Ok(out)
    }

    /// `(m, n)` = smallest and largest total degree of a stored monomial.
    pub fn band_limits(&self) -> Result<(u32, u32)> {
        let totals = self.coeffs.keys().map(MultiIndex::total);
        let (lo, hi) = totals.fold((u32::MAX, 0), |(lo, hi), t| (lo.min(t), hi.max(t)));
        if self.is_zero() {
            return invalid("band limits of the zero polynomial are undefined");
        }
        Ok((lo, hi))
    }

    /// Band limits of `p` viewed as a polynomial in `z_axis` alone.
    pub fn band_limits_wrt(&self, axis: usize) -> Result<(u32, u32)> {
        if axis >= self.dim {
            return invalid(format!("axis {axis} out of range for dimension {}", self.dim));
        }
        if self.is_zero() {
            return invalid("band limits of the zero polynomial are undefined");
        }
        let vals = self.coeffs.keys().map(|a| a.entries()[axis]);
        Ok(vals.fold((u32::MAX, 0), |(lo, hi), t| (lo.min(t), hi.max(t))))
    }

    /// `Σ_α |p̂(α)|`.
    pub fn coeff_l1(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// `(Σ_α |p̂(α)|²)^{1/2}`.
    pub fn coeff_l2(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn max_coeff_diff(&self, other: &MultiPoly) -> f64 {
        let mut worst: f64 = 0.0;
        for (alpha, c) in &self.coeffs {
            worst = worst.max((c - other.coeff(alpha)).norm());
        }
        for (alpha, c) in &other.coeffs {
            if !self.coeffs.contains_key(alpha) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    fn check_same_dim(&self, other: &MultiPoly) -> Result<()> {
        if self.dim != other.dim {
            return Err(VniError::DimensionMismatch(format!(
                "polynomials of dimension {} and {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_same_dim(other)?;
        let mut out = self.clone();
        for (alpha, c) in &other.coeffs {
            out.add_term(alpha.clone(), *c)?;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_same_dim(other)?;
        let mut out = self.clone();
        for (alpha, c) in &other.coeffs {
            out.add_term(alpha.clone(), -c)?;
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_same_dim(other)?;
        let mut out = MultiPoly::zero(self.dim)?;
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                out.add_term(a.plus(b), ca * cb)?;
            }
        }
        Ok(out)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    /// Panics on a dimension mismatch; use [`MultiPoly::try_add`] otherwise.
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("polynomial dimensions differ")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("polynomial dimensions differ")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("polynomial dimensions differ")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// `C(d+n, d)`, the dimension of the space of homogeneous polynomials of
/// degree `n` in `d + 1` variables, or of all polynomials of degree ≤ n in `d`
/// variables. `None` on overflow.
pub fn homogeneous_dim(d: u64, n: u64) -> Option<u128> {
    let k = d.min(n) as u128;
    let top = (d + n) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(top - i)? / (i + 1);
    }
    Some(acc)
}

/// `ln C(d+n, d)` in floating point; usable where the exact value overflows.
pub fn ln_homogeneous_dim(d: u64, n: u64) -> f64 {
    let k = d.min(n);
    let top = (d + n) as f64;
    (0..k).map(|i| ((top - i as f64) / (i + 1) as f64).ln()).sum()
}
