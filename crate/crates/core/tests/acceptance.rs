//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
//!
//! Runs without the libtest harness so the lines show up in `cargo test` output.

// `!(a <= b)` is deliberate: NaN must fail a check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use vnlab::besov;
use vnlab::cli::{vn_random_suite, CDN_D3_CEILING, GALLERY_MAX_SUP, GALLERY_MIN_RATIO};
use vnlab::hankel::{self, HankelSpec};
use vnlab::kernels;
use vnlab::kmn;
use vnlab::linalg::{self, cx, operator_norm, Mat};
use vnlab::operators::{self, eval_poly_tuple, OpPoly, TupleScheme};
use vnlab::polydisc;
use vnlab::polynomial::sup_norm;
use vnlab::MultiPoly;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure!(t < limit, "runtime {t:?} exceeds {limit:?}");
    Ok(t)
}

// 1
fn kernel_norms() -> Outcome {
    let start = Instant::now();
    for n in 1..=256u64 {
        let v = ok(kernels::l1_norm_default(&ok(kernels::fejer(n))?))?;
        ensure!((v - 1.0).abs() <= 1e-9, "‖F_{n}‖₁ = {v}");
    }
    let mut w_max = 0.0f64;
    for n in 0..=12u32 {
        let v = ok(kernels::l1_norm_upper_auto(&kernels::dyadic_w(n)))?;
        ensure!(v <= 1.5 + 1e-9, "‖W_{n}‖₁ ≤ {v}");
        w_max = w_max.max(v);
    }
    for (k, l, m, n) in kernels::random_trapezoid_params(200, 1) {
        let v = ok(kernels::l1_norm_upper_auto(&ok(kernels::trapezoid(k, l, m, n))?))?;
        let b = kernels::trapezoid_l1_bound(k, l, m, n);
        ensure!(v <= b + 1e-9, "‖V_{{{k},{l},{m},{n}}}‖₁ ≤ {v} > {b}");
    }
    let sweep = ok(kernels::splitting_sweep(&[3, 4], 512))?;
    let v_max = sweep.iter().map(|r| r.l1_upper).fold(0.0, f64::max);
    ensure!(v_max <= 6.0 + 1e-9, "splitting kernel reaches {v_max}");
    let t = within(start, Duration::from_secs(10))?;
    Ok(format!("max ‖W_n‖ ≤ {w_max:.6}, max ‖V‖ ≤ {v_max:.6} over {} kernels, {t:.2?}", sweep.len()))
}

// 2
fn kmn_sandwich() -> Outcome {
    let start = Instant::now();
    let grid = ok(kmn::kmn_grid(512))?;
    ensure!(grid.len() == 513 * 514 / 2, "grid has {} rows", grid.len());
    let mut worst_gap = f64::INFINITY;
    for b in &grid {
        let gap = b.best_upper() + 1e-9 - b.best_lower();
        ensure!(gap >= 0.0, "sandwich fails at ({}, {})", b.m, b.n);
        worst_gap = worst_gap.min(gap);
        ensure!(
            b.upper_constructive <= b.upper_formula + 1e-9,
            "‖h‖ = {} above {} at ({}, {})",
            b.upper_constructive,
            b.upper_formula,
            b.m,
            b.n
        );
        if b.m == b.n {
            ensure!(b.lower_formula == 1.0 && b.upper_formula == 1.0, "K({0},{0}) formulas not exactly 1", b.n);
        }
    }
    let dev = grid
        .par_iter()
        .map(|b| Ok((kmn::h1_norm_quadrature(b.m, b.n)? - b.upper_constructive).abs()))
        .collect::<Result<Vec<f64>, vnlab::VniError>>()
        .map_err(|e| e.to_string())?
        .into_iter()
        .fold(0.0, f64::max);
    ensure!(dev <= 1e-6, "coefficient vs quadrature ‖h‖ differ by {dev}");
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!("{} pairs, min slack {worst_gap:.3e}, quadrature dev {dev:.2e}, {t:.2?}", grid.len()))
}

// 3
fn hankel_lower() -> Outcome {
    let start = Instant::now();
    let mut prev = 0.0;
    let truncs: Vec<usize> = (1..=64).chain([96, 128, 192, 256]).collect();
    for &n in &truncs {
        let v = ok(kmn::hilbert_matrix_norm(n))?;
        ensure!(v >= prev - 1e-12, "Hilbert norm drops at trunc {n}");
        ensure!(v <= PI + 1e-9, "Hilbert norm {v} above π at trunc {n}");
        prev = v;
    }
    let two = ok(kmn::hilbert_matrix_norm(2))?;
    let exact = (4.0 + 13f64.sqrt()) / 6.0;
    ensure!((two - exact).abs() <= 1e-10, "trunc 2: {two} vs {exact}");
    for n in 0..=512usize {
        for m in 0..=n {
            let q1 = kmn::harmonic_window(m, n);
            let lb = ((n + 2) as f64 / (m + 1) as f64).ln();
            ensure!(q1 >= lb, "q(1) = {q1} < {lb} at ({m}, {n})");
        }
    }
    let t = within(start, Duration::from_secs(20))?;
    Ok(format!("‖H_256‖ = {prev:.9}, trunc 2 dev {:.1e}, {t:.2?}", (two - exact).abs()))
}

// 4
fn sharpness_witness() -> Outcome {
    let mut worst = 0.0f64;
    for (m, n) in [(0, 0), (0, 3), (1, 3), (2, 5)] {
        let w = ok(operators::sqrt_band_witness(m, n, n + 4))?;
        let target = ((n - m + 1) as f64).sqrt();
        let dev = (w.ratio - target).abs();
        ensure!(dev <= 1e-9, "({m}, {n}): ratio {} vs {target}", w.ratio);
        worst = worst.max(dev);
    }
    Ok(format!("max deviation {worst:.1e}"))
}

/// Hankel matrix of a random symbol of degree `≤ trunc - 2` scaled to norm `target`.
fn scaled_hankel(rng: &mut ChaCha8Rng, trunc: usize, target: f64) -> Result<Mat, String> {
    let deg = rng.random_range(0..=trunc - 2);
    let raw: Vec<Complex64> = (0..=deg).map(|_| cx(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    let h = hankel::hankel_matrix(&ok(HankelSpec::new(raw, trunc))?);
    let nrm = ok(operator_norm(&h))?;
    Ok(h * cx(target / nrm, 0.0))
}

// 5
fn two_by_two() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut inside, mut outside) = (0, 0);
    for i in 0..500 {
        let trunc = rng.random_range(3..=10);
        // every tenth instance has r = 1, where only H = 0 passes
        let r: f64 = if i % 10 == 0 { 1.0 } else { rng.random_range(0.0..1.0) };
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let delta = sign * 10f64.powf(rng.random_range(-4.0..-1.3));
        let target = 1.0 - r * r + delta;
        let h = if target <= 0.0 { linalg::zeros(trunc, trunc) } else { scaled_hankel(&mut rng, trunc, target)? };
        let crit = ok(hankel::two_by_two_criterion(r, &h))?;
        let svd = ok(operator_norm(&hankel::assemble_block(r, &h)))? <= 1.0 + 1e-8;
        ensure!(crit == svd, "instance {i}: criterion {crit}, SVD {svd} (r = {r}, δ = {delta})");
        if crit {
            inside += 1;
        } else {
            outside += 1;
        }
    }
    // r = 1 with H = 0 is a contraction; any non-zero H is not
    let z = linalg::zeros(4, 4);
    ensure!(ok(hankel::two_by_two_criterion(1.0, &z))?, "r = 1, H = 0 rejected");
    let small = scaled_hankel(&mut rng, 4, 1e-6)?;
    ensure!(!ok(hankel::two_by_two_criterion(1.0, &small))?, "r = 1, H ≠ 0 accepted");
    ensure!(ok(operator_norm(&hankel::assemble_block(1.0, &small)))? > 1.0 + 1e-8, "r = 1, H ≠ 0 is a contraction");
    ensure!(inside > 100 && outside > 100, "straddle is lopsided: {inside} in, {outside} out");
    Ok(format!("500 instances agree ({inside} contractions, {outside} not)"))
}

fn monomials_up_to(d: usize, deg: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut a = vec![0u32; d];
    loop {
        if a.iter().sum::<u32>() <= deg {
            out.push(a.clone());
        }
        let mut j = 0;
        loop {
            if j == d {
                return out;
            }
            a[j] += 1;
            if a[j] <= deg {
                break;
            }
            a[j] = 0;
            j += 1;
        }
    }
}

// 6
fn foguel_hankel() -> Outcome {
    let start = Instant::now();
    let mut block_dev = 0.0f64;
    let mut checked = 0;
    for d in 1..=3usize {
        let f = ok(hankel::random_foguel_tuple(d, 3, hankel::recommended_trunc(6, 3), 60 + d as u64))?;
        for alpha in monomials_up_to(d, 6) {
            let p = ok(MultiPoly::monomial(&alpha, cx(1.0, 0.0)))?;
            let direct = ok(eval_poly_tuple(&p, f.as_tuple()))?.value;
            let block = ok(hankel::block_formula_eval(&p, &f))?;
            let dev = linalg::max_abs_entry(&(direct - block));
            ensure!(dev <= 1e-10, "d = {d}, α = {alpha:?}: block formula off by {dev}");
            block_dev = block_dev.max(dev);
            checked += 1;
        }
    }
    let reports = (0..100u64)
        .into_par_iter()
        .map(|i| -> Result<(f64, f64, usize), String> {
            let d = 1 + (i % 3) as usize;
            let deg = 2 + (i % 4) as u32;
            let f = ok(hankel::random_foguel_tuple(d, 3, hankel::recommended_trunc(deg as usize, 3), 1000 + i))?;
            let p = ok(polydisc::random_dense(d, deg, 2000 + i))?;
            let r = ok(hankel::verify_foguel_vn(&p, &f))?;
            Ok((r.ratio, r.corner_ratio, d))
        })
        .collect::<Result<Vec<_>, String>>()?;
    let mut worst = 0.0f64;
    let mut worst_corner = 0.0f64;
    for (i, (ratio, corner, d)) in reports.into_iter().enumerate() {
        ensure!(ratio <= 1.0 + 1e-4, "instance {i}: ratio {ratio}");
        ensure!(corner <= d as f64 * (1.0 + 1e-4), "instance {i}: corner ratio {corner} for d = {d}");
        worst = worst.max(ratio);
        worst_corner = worst_corner.max(corner / d as f64);
    }
    let t = within(start, Duration::from_secs(120))?;
    Ok(format!(
        "{checked} monomials (max dev {block_dev:.1e}); 100 instances, max ratio {worst:.6}, max corner/d {worst_corner:.6}, {t:.2?}"
    ))
}

// 7
fn splitting() -> Outcome {
    let mut worst = [0.0f64; 3];
    let degrees = [6u32, 12, 24, 48];
    let results = (0..50u64)
        .into_par_iter()
        .map(|i| -> Result<polydisc::SplitResult, String> {
            let n = degrees[i as usize % 4];
            let raw = ok(polydisc::random_homogeneous(3, n, 700 + i))?;
            let s = ok(sup_norm(&raw, vnlab::polynomial::default_points_per_axis(&raw)))?.grid_max;
            let p = raw.scale(cx(1.0 / s, 0.0));
            ok(polydisc::split(&p, n, n))
        })
        .collect::<Result<Vec<_>, String>>()?;
    for (i, r) in results.iter().enumerate() {
        let n = degrees[i % 4];
        ensure!(r.sum_error <= 1e-12, "poly {i}: parts sum off by {}", r.sum_error);
        ensure!(r.residual_error <= 1e-12, "poly {i}: residual identity off by {}", r.residual_error);
        for (j, q) in r.parts.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let (lo, hi) = ok(q.band_limits_wrt(j))?;
            ensure!(lo >= r.band_low && hi <= n, "poly {i} part {}: z_{} degrees [{lo}, {hi}]", j + 1, j + 1);
            let f = r.sup_norm_factors[j];
            ensure!(f <= polydisc::EXPLICIT_FACTORS_D3[j], "poly {i} part {}: factor {f}", j + 1);
            worst[j] = worst[j].max(f);
        }
    }
    Ok(format!("50 polynomials, max factors ({:.3}, {:.3}, {:.3}) vs (6, 42, 43)", worst[0], worst[1], worst[2]))
}

/// Recorded ceilings for `pipeline(d, n) / log(n+1)^{d-3}` over `2 ≤ n ≤ 512`
/// (measured maxima 104.07 at n = 15 and 261.13 at n = 16).
const PIPELINE_LOG_CONST: [(usize, f64); 2] = [(4, 105.0), (5, 262.0)];

// 8
fn cdn_pipeline() -> Outcome {
    let sum: f64 = polydisc::EXPLICIT_FACTORS_D3.iter().sum();
    let dev = (6f64.sqrt() * sum - 91.0 * 6f64.sqrt()).abs();
    ensure!(dev <= 1e-12, "√6·(6+42+43) − 91√6 = {dev}");
    ensure!(91.0 * 6f64.sqrt() <= CDN_D3_CEILING, "91√6 above 223");
    let d3 = (1..=512u32)
        .into_par_iter()
        .map(|n| polydisc::pipeline_bound(3, n).map(|b| b.value))
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|e| e.to_string())?;
    let max3 = d3.iter().copied().fold(0.0, f64::max);
    ensure!(max3 <= CDN_D3_CEILING, "pipeline(3, n) reaches {max3}");
    let mut consts = Vec::new();
    for (d, ceiling) in PIPELINE_LOG_CONST {
        let vals = (2..=512u32)
            .into_par_iter()
            .map(|n| polydisc::pipeline_bound(d, n).map(|b| b.value / ((n as f64 + 1.0).ln()).powi(d as i32 - 3)))
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| e.to_string())?;
        let c = vals.iter().copied().fold(0.0, f64::max);
        // vals[k] is n = k + 2; compare n ≥ 256 with n < 256
        let head = vals[..254].iter().copied().fold(0.0, f64::max);
        let tail = vals[254..].iter().copied().fold(0.0, f64::max);
        ensure!(c <= ceiling, "d = {d}: constant {c} above recorded {ceiling}");
        ensure!(tail <= head, "d = {d}: ratio still growing ({tail} on n ≥ 256 vs {head} below)");
        consts.push(format!("C_{d} = {c:.3} (n ≥ 256: {tail:.3})"));
    }
    Ok(format!("max pipeline(3, n) = {max3:.3}; {}", consts.join(", ")))
}

// 9
fn von_neumann_ando() -> Outcome {
    let schemes = [TupleScheme::SingleGenerator, TupleScheme::DirectSum, TupleScheme::Diagonal];
    let mut worst = 0.0f64;
    for d in 1..=2 {
        let suite = ok(vn_random_suite(d, 100, 6, 8, &schemes, 900 + d as u64, None))?;
        ensure!(suite.len() == 100, "suite size {}", suite.len());
        for (i, r) in suite.iter().enumerate() {
            ensure!(
                r.op_norm <= r.sup_certified * (1.0 + 1e-6),
                "d = {d} instance {i}: ‖p(T)‖ = {} > {}",
                r.op_norm,
                r.sup_certified
            );
            worst = worst.max(r.op_norm / r.sup_certified);
        }
    }
    Ok(format!("200 instances, max ratio {worst:.6}"))
}

/// Recorded bracket for `integral / dyadic` at `a = 0, 1, 2`.
const BESOV_BRACKET: [(f64, f64, f64); 3] = [(0.0, 0.25, 1.25), (1.0, 0.1, 1.25), (2.0, 0.05, 1.25)];

// 10
fn besov_checks() -> Outcome {
    let mut spans = Vec::new();
    let mut ratios = vec![Vec::new(); 3];
    for seed in 0..5u64 {
        let f = ok(polydisc::random_dense(1, 40, 3000 + seed))?;
        let e = ok(besov::resummation_error(&f))?;
        ensure!(e <= 1e-12, "seed {seed}: resummation off by {e}");
        let reps = ok(besov::besov_reports(&f, &[0.0, 1.0, 2.0], besov::DEFAULT_QUAD))?;
        for (j, r) in reps.iter().enumerate() {
            let (a, lo, hi) = BESOV_BRACKET[j];
            ensure!(r.ratio >= lo && r.ratio <= hi, "seed {seed}, a = {a}: ratio {} outside [{lo}, {hi}]", r.ratio);
            ratios[j].push(r.ratio);
        }
    }
    for (j, v) in ratios.iter().enumerate() {
        let (mn, mx) = v.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        ensure!(mx / mn <= 2.0, "a = {}: ratio spread {mn}..{mx}", BESOV_BRACKET[j].0);
        spans.push(format!("a={}: [{mn:.3}, {mx:.3}]", BESOV_BRACKET[j].0));
    }
    for n in [1u64, 2, 3, 10, 100, 1000] {
        let v = ok(besov::integral_asympt_ratio(n, 0.0))?;
        let target = n as f64 / (n as f64 + 1.0);
        ensure!((v - target).abs() <= 1e-9, "N = {n}: {v} vs {target}");
    }
    for k in 1..=12u32 {
        let f = ok(MultiPoly::monomial(&[k], cx(1.0, 0.0)))?;
        let r = ok(besov::bernstein_check(&f, k, 0.7))?;
        let all = [r.a1, r.a2, r.b1, r.b2];
        ensure!(all.iter().all(|x| *x == Some(true)), "z^{k}: {all:?}");
        ensure!(r.sup_f == 1.0, "‖z^{k}‖ = {}", r.sup_f);
        ensure!(r.sup_df == k as f64, "‖(z^{k})′‖ = {}", r.sup_df);
        ensure!((r.sup_fr - 0.7f64.powi(k as i32)).abs() <= 1e-15, "‖z^{k} dilated‖ = {}", r.sup_fr);
    }
    Ok(spans.join(", "))
}

// 11
fn gallery() -> Outcome {
    let g = ok(polydisc::counterexample_gallery())?;
    let e = &g[0];
    let exact = 3.0 * 3f64.sqrt();
    ensure!((e.op_norm - exact).abs() <= 1e-9, "‖p(T)‖ = {}", e.op_norm);
    ensure!(e.sup.certified_upper <= GALLERY_MAX_SUP, "certified sup {}", e.sup.certified_upper);
    ensure!(e.ratio >= GALLERY_MIN_RATIO, "ratio {}", e.ratio);
    ensure!(e.max_commutator == 0.0, "commutator {}", e.max_commutator);
    ensure!(e.max_contraction <= 1.0 + 1e-12, "contraction {}", e.max_contraction);
    Ok(format!("‖p(T)‖ = {:.12}, sup ≤ {:.6}, ratio {:.6}", e.op_norm, e.sup.certified_upper, e.ratio))
}

// 12
fn doubly_commuting() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut min_eig = f64::INFINITY;
    for _ in 0..10 {
        let t = linalg::random_contraction(5, rng.random_range(0.5..0.98), &mut rng);
        for radius in [0.0, 0.5, 0.9, 1.0] {
            for j in 0..32 {
                let z = Complex64::from_polar(radius, 2.0 * PI * j as f64 / 32.0);
                let p = ok(operators::poisson_kernel(z, &t))?;
                let e = ok(linalg::min_hermitian_eigenvalue(&p))?;
                ensure!(e >= -1e-9, "min eigenvalue {e} at z = {z}");
                min_eig = min_eig.min(e);
            }
        }
    }
    let mut worst = 0.0f64;
    for i in 0..30 {
        let (a, b) = (rng.random_range(2..=4), rng.random_range(2..=4));
        let (m, n) = (rng.random_range(0..3usize), 3 + rng.random_range(0..4usize));
        let c = linalg::random_contraction(a, 1.0, &mut rng);
        let t = linalg::kron(&c, &linalg::identity(b));
        let coeffs: Vec<Mat> =
            (m..=n).map(|_| linalg::kron(&linalg::identity(a), &linalg::random_gaussian(b, b, &mut rng))).collect();
        let p = ok(OpPoly::new(m, coeffs))?;
        let r = ok(operators::verify_doubly_commuting(&p, &t, 1e-12))?;
        ensure!(r.ratio <= 1.0 + 1e-6, "instance {i}: ratio {}", r.ratio);
        worst = worst.max(r.ratio);
    }
    Ok(format!("min eigenvalue {min_eig:.3e}; 30 tensor-split instances, max ratio {worst:.6}"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("kernel L1 norms", kernel_norms),
        ("K(m,n) sandwich", kmn_sandwich),
        ("Hankel lower-bound machinery", hankel_lower),
        ("sqrt(n-m+1) sharpness witness", sharpness_witness),
        ("2x2 contraction criterion", two_by_two),
        ("Foguel-Hankel tuples", foguel_hankel),
        ("band splitting", splitting),
        ("C(d,n) pipeline", cdn_pipeline),
        ("von Neumann / Ando suites", von_neumann_ando),
        ("Besov norms", besov_checks),
        ("counterexample gallery", gallery),
        ("doubly commuting and Poisson", doubly_commuting),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS {name}: {msg} [{t:.2?}]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {msg} [{t:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
