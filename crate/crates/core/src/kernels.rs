//! Trigonometric kernels given by their Fourier coefficient profiles.
//!
//! Profiles are only ever used as coefficient multipliers (see [`convolve`])
//! or integrated in absolute value (see [`l1_norm`]).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::polynomial::MultiPoly;

/// Default quadrature size for [`l1_norm`].
pub const DEFAULT_L1_QUAD: usize = 1 << 14;

/// Finitely supported coefficient sequence `j ↦ ĉ(j)`, `j ∈ ℤ`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelProfile {
    coeffs: BTreeMap<i64, f64>,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct KernelJson {
    label: String,
    coeffs: Vec<(i64, f64)>,
}

impl Serialize for KernelProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        KernelJson { label: self.label.clone(), coeffs: self.coeffs.iter().map(|(j, c)| (*j, *c)).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KernelProfile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = KernelJson::deserialize(d)?;
        Ok(KernelProfile::from_coeffs(raw.label, raw.coeffs))
    }
}

impl KernelProfile {
    /// Builds a profile, dropping zero entries.
    pub fn from_coeffs<I>(label: impl Into<String>, coeffs: I) -> Self
    where
        I: IntoIterator<Item = (i64, f64)>,
    {
        let mut map = BTreeMap::new();
        for (j, c) in coeffs {
            if c != 0.0 {
                *map.entry(j).or_insert(0.0) += c;
            }
        }
        map.retain(|_, c| *c != 0.0);
        KernelProfile { coeffs: map, label: label.into() }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `ĉ(j)`, zero off the support.
    pub fn at(&self, j: i64) -> f64 {
        self.coeffs.get(&j).copied().unwrap_or(0.0)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.coeffs.iter().map(|(j, c)| (*j, *c))
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn max_abs_index(&self) -> i64 {
        self.support().map(|(lo, hi)| lo.abs().max(hi.abs())).unwrap_or(0)
    }

    /// Multiplies by `e^{i·shift·t}`; `|K|` and hence the L¹ norm are unchanged.
    pub fn shifted(&self, shift: i64) -> KernelProfile {
        KernelProfile::from_coeffs(
            format!("{} shifted by {shift}", self.label),
            self.coeffs.iter().map(|(j, c)| (j + shift, *c)),
        )
    }

    pub fn scaled(&self, s: f64, label: impl Into<String>) -> KernelProfile {
        KernelProfile::from_coeffs(label, self.coeffs.iter().map(|(j, c)| (*j, c * s)))
    }

    pub fn plus(&self, other: &KernelProfile, label: impl Into<String>) -> KernelProfile {
        KernelProfile::from_coeffs(label, self.coeffs().chain(other.coeffs()))
    }

    pub fn minus(&self, other: &KernelProfile, label: impl Into<String>) -> KernelProfile {
        KernelProfile::from_coeffs(label, self.coeffs().chain(other.coeffs().map(|(j, c)| (j, -c))))
    }

    /// Largest coefficient deviation between two profiles.
    pub fn max_diff(&self, other: &KernelProfile) -> f64 {
        let keys: std::collections::BTreeSet<i64> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.into_iter().map(|j| (self.at(j) - other.at(j)).abs()).fold(0.0, f64::max)
    }
}

/// Fejér kernel `F_n`: `ĉ(j) = 1 - |j|/n` for `|j| < n`.
pub fn fejer(n: u64) -> Result<KernelProfile> {
    if n == 0 {
        return invalid("fejer(n) requires n >= 1");
    }
    let n = n as i64;
    Ok(KernelProfile::from_coeffs(format!("F_{n}"), (1 - n..n).map(|j| (j, 1.0 - j.abs() as f64 / n as f64))))
}

/// Symmetric trapezoid `G_{m,n} = n/(n-m) F_n - m/(n-m) F_m`: one on `[-m, m]`,
/// affine down to zero at `±n`.
pub fn symmetric_trapezoid(m: u64, n: u64) -> Result<KernelProfile> {
    if m >= n {
        return invalid(format!("symmetric_trapezoid requires m < n, got ({m}, {n})"));
    }
    let (mi, ni) = (m as i64, n as i64);
    Ok(KernelProfile::from_coeffs(
        format!("G_{{{m},{n}}}"),
        (1 - ni..ni).map(|j| {
            let a = j.abs();
            let v = if a <= mi { 1.0 } else { (ni - a) as f64 / (ni - mi) as f64 };
            (j, v)
        }),
    ))
}

/// `G_{m,n}` assembled from Fejér kernels; used to cross-check the trapezoids.
pub fn fejer_combination(m: u64, n: u64) -> Result<KernelProfile> {
    if m >= n {
        return invalid(format!("fejer_combination requires m < n, got ({m}, {n})"));
    }
    let w = (n - m) as f64;
    let big = fejer(n)?.scaled(n as f64 / w, "");
    if m == 0 {
        return Ok(big.scaled(1.0, format!("G_{{0,{n}}}")));
    }
    let small = fejer(m)?.scaled(m as f64 / w, "");
    Ok(big.minus(&small, format!("G_{{{m},{n}}}")))
}

/// de la Vallée-Poussin type kernel `V_{k,l,m,n}`: real valued, with
/// non-negative coefficients forming the trapezoid supported in `(k, n)`, one on
/// `[l, m]`, affine on `[k, l]` and `[m, n]`, mirrored to negative indices.
pub fn trapezoid(k: u64, l: u64, m: u64, n: u64) -> Result<KernelProfile> {
    if !(k < l && l <= m && m < n) {
        return invalid(format!("trapezoid requires 0 <= k < l <= m < n, got ({k}, {l}, {m}, {n})"));
    }
    let (ki, li, mi, ni) = (k as i64, l as i64, m as i64, n as i64);
    let value = |a: i64| -> f64 {
        if a <= ki || a >= ni {
            0.0
        } else if a < li {
            (a - ki) as f64 / (li - ki) as f64
        } else if a <= mi {
            1.0
        } else {
            (ni - a) as f64 / (ni - mi) as f64
        }
    };
    Ok(KernelProfile::from_coeffs(format!("V_{{{k},{l},{m},{n}}}"), (1 - ni..ni).map(|j| (j, value(j.abs())))))
}

/// `(n+m)/(n-m) + (l+k)/(l-k)`, the triangle-inequality bound for `‖V_{k,l,m,n}‖_{L¹}`.
pub fn trapezoid_l1_bound(k: u64, l: u64, m: u64, n: u64) -> f64 {
    (n + m) as f64 / (n - m) as f64 + (l + k) as f64 / (l - k) as f64
}

/// Parameters `(k, l, plateau_end, right)` of the band-splitting kernel for a
/// `(m, n)`-band-limited polynomial in `d` variables, after rounding `m` down
/// to a multiple of `2d`.
pub fn splitting_parameters(d: usize, m: u64, n: u64) -> (u64, u64, u64, u64) {
    let k = m / (2 * d as u64);
    (k, 2 * k, n, 2 * n)
}

/// The band-splitting kernel `V` with plateau `[2⌊m/2d⌋, n]` and right ramp to
/// `2n`. When `⌊m/2d⌋ = 0` the left ramp disappears and `V = G_{n,2n}`.
pub fn splitting_kernel(d: usize, m: u64, n: u64) -> Result<KernelProfile> {
    if d == 0 {
        return invalid("splitting kernel needs d >= 1");
    }
    if n == 0 || m > n {
        return invalid(format!("splitting kernel needs 0 <= m <= n, n >= 1, got ({m}, {n})"));
    }
    let (k, l, p, r) = splitting_parameters(d, m, n);
    let mut v = if k == 0 { symmetric_trapezoid(p, r)? } else { trapezoid(k, l, p, r)? };
    v.label = format!("V[d={d},m={m},n={n}]");
    Ok(v)
}

/// Upper bound for the L¹ norm of the splitting kernel from the trapezoid lemma.
pub fn splitting_kernel_l1_bound(d: usize, m: u64, n: u64) -> f64 {
    let (k, l, p, r) = splitting_parameters(d, m, n);
    let right = (r + p) as f64 / (r - p) as f64;
    if k == 0 {
        right
    } else {
        right + (l + k) as f64 / (l - k) as f64
    }
}

/// Analytic dyadic kernel `W_n`: `W_0 = 1 + z`; for `n ≥ 1` the triangle on
/// `(2^{n-1}, 2^{n+1})` peaking with value one at `2^n`.
pub fn dyadic_w(n: u32) -> KernelProfile {
    if n == 0 {
        return KernelProfile::from_coeffs("W_0", [(0, 1.0), (1, 1.0)]);
    }
    let lo = 1i64 << (n - 1);
    let mid = 1i64 << n;
    let hi = 1i64 << (n + 1);
    KernelProfile::from_coeffs(
        format!("W_{n}"),
        (lo + 1..hi).map(|j| {
            let v = if j <= mid { (j - lo) as f64 / lo as f64 } else { (hi - j) as f64 / mid as f64 };
            (j, v)
        }),
    )
}

/// `Ŵ_n(k)` without building the profile.
pub fn dyadic_w_at(n: u32, k: u64) -> f64 {
    if n == 0 {
        return if k <= 1 { 1.0 } else { 0.0 };
    }
    let lo = 1u64 << (n - 1);
    let mid = 1u64 << n;
    let hi = 1u64 << (n + 1);
    if k <= lo || k >= hi {
        0.0
    } else if k <= mid {
        (k - lo) as f64 / lo as f64
    } else {
        (hi - k) as f64 / mid as f64
    }
}

/// Indices `n` with `Ŵ_n(k) ≠ 0` for some `k ≤ degree`.
pub fn dyadic_range(degree: u64) -> std::ops::RangeInclusive<u32> {
    // ⌈log₂ degree⌉; W_0 alone covers degrees 0 and 1
    let top = if degree <= 1 { 0 } else { 64 - (degree - 1).leading_zeros() };
    0..=top
}

/// Analytic Dirichlet-type kernel `Σ_{k=0}^n z^k`.
pub fn dirichlet(n: u64) -> KernelProfile {
    KernelProfile::from_coeffs(format!("D_{n}"), (0..=n as i64).map(|j| (j, 1.0)))
}

/// Samples `Σ ĉ(j) e^{ijt}` at `t_k = 2πk/N` and returns the trapezoidal value
/// `N⁻¹ Σ_k |K(t_k)|` together with the number of nodes.
fn trapezoid_rule(k: &KernelProfile, quad_points: usize) -> f64 {
    let n = quad_points;
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (j, c) in k.coeffs() {
        let idx = j.rem_euclid(n as i64) as usize;
        buf[idx] += Complex64::new(c, 0.0);
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    buf.iter().map(|v| v.norm()).sum::<f64>() / n as f64
}

fn check_quad(k: &KernelProfile, quad_points: usize) -> Result<()> {
    let need = 8 * (k.max_abs_index() as usize + 1);
    if quad_points < need {
        return invalid(format!("quad_points = {quad_points} is below 8 (max |index| + 1) = {need} for {}", k.label));
    }
    Ok(())
}

/// `(2π)⁻¹ ∫ |K(e^{it})| dt` by the trapezoidal rule on `quad_points` nodes.
pub fn l1_norm(k: &KernelProfile, quad_points: usize) -> Result<f64> {
    check_quad(k, quad_points)?;
    Ok(trapezoid_rule(k, quad_points))
}

pub fn l1_norm_default(k: &KernelProfile) -> Result<f64> {
    let need = 8 * (k.max_abs_index() as usize + 1);
    l1_norm(k, DEFAULT_L1_QUAD.max(need.next_power_of_two()))
}

/// Rigorous upper bound for the L¹ norm.
///
/// With `D` the half-width of the frequency support about an integer centre,
/// `‖K‖₁ ≤ Q_N + (π/N)‖K'‖₁ ≤ Q_N + (πD/N)‖K‖₁`, where `Q_N` is the
/// trapezoidal value; so `‖K‖₁ ≤ Q_N / (1 - πD/N)` once `N > πD`.
pub fn l1_norm_upper(k: &KernelProfile, quad_points: usize) -> Result<f64> {
    check_quad(k, quad_points)?;
    let Some((lo, hi)) = k.support() else {
        return Ok(0.0);
    };
    let centre = (lo + hi).div_euclid(2);
    let half_width = (hi - centre).max(centre - lo) as f64;
    let x = PI * half_width / quad_points as f64;
    if x >= 1.0 {
        return invalid("quadrature too coarse for a certified L1 bound");
    }
    let shifted = k.shifted(-centre);
    Ok(trapezoid_rule(&shifted, quad_points) / (1.0 - x))
}

/// Certified L¹ bound with a node count chosen so the certificate costs < 2.5%.
pub fn l1_norm_upper_auto(k: &KernelProfile) -> Result<f64> {
    let (lo, hi) = k.support().unwrap_or((0, 0));
    let need = (128 * ((hi - lo) as usize / 2 + 1)).max(8 * (k.max_abs_index() as usize + 1));
    l1_norm_upper(k, need.next_power_of_two().max(1024))
}

/// Seeded `(k, l, m, n)` with `k < l ≤ m < n ≤ 800`.
pub fn random_trapezoid_params(count: usize, seed: u64) -> Vec<(u64, u64, u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.random_range(0..200u64);
            let l = k + rng.random_range(1..200u64);
            let m = l + rng.random_range(0..200u64);
            let n = m + rng.random_range(1..200u64);
            (k, l, m, n)
        })
        .collect()
}

/// One splitting kernel from [`splitting_sweep`].
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SweepRow {
    pub d: usize,
    /// `⌊m/2d⌋`; every `m` with the same value gives the same kernel.
    pub k: u64,
    pub n: u64,
    pub l1_upper: f64,
    pub lemma_bound: f64,
}

/// Nodes used by [`splitting_sweep`] for band end `n`.
pub fn sweep_quad(n: u64) -> usize {
    32 * n as usize
}

/// Certified `‖V‖_{L¹}` for every distinct splitting kernel with
/// `0 ≤ m ≤ n ≤ n_max`, ordered by `(d, n, k)`.
///
/// The kernel for `k = ⌊m/2d⌋` is `G_{n,2n} - G_{k,2k}` (`G_{0,0} = 0`), so the
/// trapezoidal sums come from closed-form Fejér values on `32 n` nodes, shared
/// across `k`; the result equals [`l1_norm_upper`] with [`sweep_quad`] nodes.
pub fn splitting_sweep(ds: &[usize], n_max: u64) -> Result<Vec<SweepRow>> {
    let Some(dmin) = ds.iter().copied().min() else {
        return Ok(Vec::new());
    };
    if dmin == 0 {
        return invalid("splitting sweep needs d >= 1");
    }
    let per_n: Vec<Vec<f64>> = (1..=n_max).into_par_iter().map(|n| sweep_one(n, n / (2 * dmin as u64))).collect();
    let mut rows = Vec::new();
    for &d in ds {
        for (n, sums) in (1..=n_max).zip(&per_n) {
            for k in 0..=n / (2 * d as u64) {
                let m = k * 2 * d as u64;
                rows.push(SweepRow {
                    d,
                    k,
                    n,
                    l1_upper: sums[k as usize],
                    lemma_bound: splitting_kernel_l1_bound(d, m, n),
                });
            }
        }
    }
    Ok(rows)
}

fn sweep_one(n: u64, k_max: u64) -> Vec<f64> {
    let nodes = sweep_quad(n);
    let half = nodes / 2;
    let nf = n as f64;
    let mut sums = vec![0.0; k_max as usize + 1];
    for j in 0..=half {
        let weight = if j == 0 || j == half { 1.0 } else { 2.0 };
        if j == 0 {
            // F_N(0) = N
            for (k, acc) in sums.iter_mut().enumerate() {
                *acc += (3.0 * nf - 3.0 * k as f64).abs();
            }
            continue;
        }
        let t = 2.0 * PI * j as f64 / nodes as f64;
        let s2 = (0.5 * t).sin().powi(2);
        let (a1, a2) = ((0.5 * nf * t).sin(), (nf * t).sin());
        let a = (a2 * a2 - a1 * a1) / (nf * s2);
        let w = Complex64::from_polar(1.0, 0.5 * t);
        let mut z = Complex64::new(1.0, 0.0);
        sums[0] += weight * a.abs();
        for (k, acc) in sums.iter_mut().enumerate().skip(1) {
            z *= w;
            let (b1, b2) = (z.im, 2.0 * z.im * z.re);
            let b = (b2 * b2 - b1 * b1) / (k as f64 * s2);
            *acc += weight * (a - b).abs();
        }
    }
    // support is [1-2n, 2n-1]
    let x = PI * (2.0 * nf - 1.0) / nodes as f64;
    sums.iter().map(|v| v / nodes as f64 / (1.0 - x)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConvolveMode {
    /// multiply `p̂(α)` by `K̂(|α|)`
    TotalDegree,
    /// multiply `p̂(α)` by `K̂(α_axis)` (0-based axis)
    Axis(usize),
}

/// Coefficient multiplier `p ↦ p * K`.
pub fn convolve(p: &MultiPoly, k: &KernelProfile, mode: ConvolveMode) -> Result<MultiPoly> {
    if let ConvolveMode::Axis(j) = mode {
        if j >= p.dim() {
            return invalid(format!("axis {j} out of range for dimension {}", p.dim()));
        }
    }
    Ok(p.map_coeffs(|alpha, c| {
        let idx = match mode {
            ConvolveMode::TotalDegree => alpha.total() as i64,
            ConvolveMode::Axis(j) => alpha.entries()[j] as i64,
        };
        c * k.at(idx)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_matches_fft_route() {
        for row in splitting_sweep(&[3, 4], 40).unwrap() {
            let v = splitting_kernel(row.d, row.k * 2 * row.d as u64, row.n).unwrap();
            let direct = l1_norm_upper(&v, sweep_quad(row.n)).unwrap();
            assert!((direct - row.l1_upper).abs() < 1e-10, "{row:?} vs {direct}");
        }
    }

    #[test]
    fn fejer_profiles() {
        assert!(fejer(0).is_err());
        let f1 = fejer(1).unwrap();
        assert_eq!(f1.coeffs().collect::<Vec<_>>(), vec![(0, 1.0)]);
        let f2 = fejer(2).unwrap();
        assert_eq!(f2.coeffs().collect::<Vec<_>>(), vec![(-1, 0.5), (0, 1.0), (1, 0.5)]);
        for n in [1, 2, 5, 8, 33] {
            let v = l1_norm_default(&fejer(n).unwrap()).unwrap();
            assert!((v - 1.0).abs() < 1e-9, "F_{n}: {v}");
        }
    }

    #[test]
    fn trapezoid_profile_and_identity() {
        assert!(trapezoid(2, 2, 4, 5).is_err());
        assert!(trapezoid(0, 3, 2, 5).is_err());
        let v = trapezoid(1, 2, 6, 12).unwrap();
        assert_eq!(v.at(2), 1.0);
        assert_eq!(v.at(6), 1.0);
        assert_eq!(v.at(1), 0.0);
        assert_eq!(v.at(12), 0.0);
        assert_eq!(v.at(-9), v.at(9));
        let g = fejer_combination(6, 12).unwrap().minus(&fejer_combination(1, 2).unwrap(), "");
        assert!(v.max_diff(&g) < 1e-14);
        let n1 = l1_norm(&v, DEFAULT_L1_QUAD).unwrap();
        assert!(n1 <= trapezoid_l1_bound(1, 2, 6, 12) + 1e-9);
        assert_eq!(trapezoid_l1_bound(1, 2, 6, 12), 6.0);
    }

    #[test]
    fn dyadic_values() {
        let w0 = dyadic_w(0);
        assert_eq!(w0.coeffs().collect::<Vec<_>>(), vec![(0, 1.0), (1, 1.0)]);
        let w1 = dyadic_w(1);
        assert_eq!(w1.at(2), 1.0);
        assert_eq!(w1.at(1), 0.0);
        assert_eq!(w1.at(3), 0.5);
        for n in 0..8 {
            let w = dyadic_w(n);
            for k in 0..600u64 {
                assert_eq!(w.at(k as i64), dyadic_w_at(n, k));
            }
        }
    }

    #[test]
    fn dirichlet_and_half_angle_norm() {
        // (2π)⁻¹∫|1 + e^{it}| dt = (2π)⁻¹∫ 2|cos(t/2)| dt = 4/π
        let v = l1_norm(&dyadic_w(0), DEFAULT_L1_QUAD).unwrap();
        assert!((v - 4.0 / PI).abs() < 1e-8, "{v}");
        let d0 = l1_norm_default(&dirichlet(0)).unwrap();
        assert!((d0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn certified_upper_brackets_quadrature() {
        let k = splitting_kernel(3, 60, 60).unwrap();
        let q = l1_norm_default(&k).unwrap();
        let u = l1_norm_upper_auto(&k).unwrap();
        assert!(u >= q);
        assert!(u <= q * 1.03);
        assert!(u <= splitting_kernel_l1_bound(3, 60, 60) + 1e-9);
    }

    #[test]
    fn splitting_kernel_shapes() {
        // m = 12, d = 3: k = 2, plateau [4, 20], right end 40
        let v = splitting_kernel(3, 12, 20).unwrap();
        assert_eq!(v.at(2), 0.0);
        assert_eq!(v.at(3), 0.5);
        assert_eq!(v.at(4), 1.0);
        assert_eq!(v.at(20), 1.0);
        assert_eq!(v.at(40), 0.0);
        // degenerate: m < 2d
        let v0 = splitting_kernel(3, 5, 5).unwrap();
        assert_eq!(v0.at(0), 1.0);
        assert_eq!(v0.at(5), 1.0);
        assert_eq!(v0.at(6), 0.8);
        assert!(splitting_kernel(3, 6, 0).is_err());
    }

    #[test]
    fn convolve_modes() {
        let p = MultiPoly::monomial(&[3], Complex64::new(1.0, 0.0)).unwrap();
        let q = convolve(&p, &dyadic_w(1), ConvolveMode::TotalDegree).unwrap();
        assert_eq!(q.coeff_of(&[3]), Complex64::new(0.5, 0.0));
        assert!(convolve(&p, &dyadic_w(1), ConvolveMode::Axis(1)).is_err());
        let ones = KernelProfile::from_coeffs("1", (0..=3).map(|j| (j, 1.0)));
        assert_eq!(convolve(&p, &ones, ConvolveMode::Axis(0)).unwrap(), p);
    }

    #[test]
    fn dyadic_range_covers_degree() {
        for deg in 0..300u64 {
            let r = dyadic_range(deg);
            let total: f64 = r.clone().map(|n| dyadic_w_at(n, deg)).sum();
            assert_eq!(total, 1.0, "degree {deg}");
            // the last block actually touches the band (no spurious trailing blocks)
            let last = *r.end();
            if deg >= 2 {
                assert!(dyadic_w_at(last, deg) > 0.0, "degree {deg}");
            }
        }
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&fejer(2).unwrap()).unwrap();
        assert_eq!(s, r#"{"label":"F_2","coeffs":[[-1,0.5],[0,1.0],[1,0.5]]}"#);
        let back: KernelProfile = serde_json::from_str(&s).unwrap();
        assert_eq!(back, fejer(2).unwrap());
    }
}
