//! Dense complex matrices.
//!
//! Operator norms come from the singular value decomposition; power
//! iteration is available only as an independent cross-check.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Result, VniError};

pub type Mat = DMatrix<Complex64>;

/// Largest dimension accepted by the norm routines.
pub const MAX_DIM: usize = 4096;

pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> Mat {
    Mat::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> Mat {
    Mat::zeros(r, c)
}

/// Truncated unilateral shift on `ℂ^n`: `e_k ↦ e_{k+1}`, `e_{n-1} ↦ 0`.
pub fn shift(n: usize) -> Mat {
    let mut s = zeros(n, n);
    for k in 0..n.saturating_sub(1) {
        s[(k + 1, k)] = cx(1.0, 0.0);
    }
    s
}

/// Matrix unit `E_{i,j}` (0-based).
pub fn matrix_unit(n: usize, i: usize, j: usize) -> Mat {
    let mut e = zeros(n, n);
    e[(i, j)] = cx(1.0, 0.0);
    e
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

fn check(m: &Mat) -> Result<()> {
    let dim = m.nrows().max(m.ncols());
    if dim > MAX_DIM {
        return Err(VniError::TooLarge { dim, cap: MAX_DIM });
    }
    if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(VniError::NonFinite("matrix entry".into()));
    }
    Ok(())
}

/// Largest singular value.
pub fn operator_norm(m: &Mat) -> Result<f64> {
    check(m)?;
    if m.is_empty() {
        return Ok(0.0);
    }
    if m.nrows() == 1 || m.ncols() == 1 {
        return Ok(m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
    }
    let sv = m.clone().singular_values();
    Ok(sv.iter().fold(0.0f64, |a, &b| a.max(b)))
}

/// Operator norm by power iteration on `M*M`; a cross-check for [`operator_norm`].
pub fn operator_norm_power(m: &Mat, iters: usize) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    let mut v = nalgebra::DVector::from_fn(m.ncols(), |i, _| cx(1.0 + (i as f64 * 0.37).sin(), 0.1));
    let mut lambda = 0.0;
    for _ in 0..iters {
        let w = &gram * &v;
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        lambda = nw / v.norm();
        v = w / cx(nw, 0.0);
    }
    lambda.sqrt()
}

/// Smallest eigenvalue of the Hermitian part `(M + M*)/2`.
pub fn min_hermitian_eigenvalue(m: &Mat) -> Result<f64> {
    check(m)?;
    let h = (m + m.adjoint()) * cx(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(h);
    Ok(eig.eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b)))
}

pub fn inverse(m: &Mat) -> Result<Mat> {
    check(m)?;
    m.clone().try_inverse().ok_or_else(|| VniError::InvalidInput("matrix is singular".into()))
}

/// `‖AB - BA‖`.
pub fn commutator_norm(a: &Mat, b: &Mat) -> Result<f64> {
    operator_norm(&(a * b - b * a))
}

pub fn max_abs_entry(m: &Mat) -> f64 {
    m.iter().fold(0.0f64, |a, z| a.max(z.norm()))
}

/// Leading `k × k` block.
pub fn compress(m: &Mat, k: usize) -> Mat {
    m.view((0, 0), (k.min(m.nrows()), k.min(m.ncols()))).into_owned()
}

pub fn random_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Mat {
    Mat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        cx(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-distributed unitary from the QR factorisation of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat {
    let g = random_gaussian(n, n, rng);
    let qr = g.qr();
    let (q, r) = qr.unpack();
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { cx(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random matrix rescaled to have operator norm `target` (≤ 1 for contractions).
pub fn random_contraction<R: Rng + ?Sized>(n: usize, target: f64, rng: &mut R) -> Mat {
    let g = random_gaussian(n, n, rng);
    let nrm = operator_norm(&g).unwrap_or(1.0).max(f64::MIN_POSITIVE);
    g * cx(target / nrm, 0.0)
}

/// `{"rows": r, "cols": c, "re": [[...]], "im": [[...]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatJson {
    pub fn from_mat(m: &Mat) -> Self {
        let re = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect()).collect();
        let im = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect()).collect();
        MatJson { rows: m.nrows(), cols: m.ncols(), re, im }
    }

    pub fn to_mat(&self) -> Result<Mat> {
        let ok_shape = |rows: &Vec<Vec<f64>>| rows.len() == self.rows && rows.iter().all(|r| r.len() == self.cols);
        if !ok_shape(&self.re) || !ok_shape(&self.im) {
            return Err(VniError::Parse(format!(
                "matrix JSON does not match declared shape {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(Mat::from_fn(self.rows, self.cols, |i, j| cx(self.re[i][j], self.im[i][j])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn norms_of_simple_matrices() {
        assert!((operator_norm(&identity(5)).unwrap() - 1.0).abs() < 1e-14);
        let mut d = zeros(2, 2);
        d[(0, 0)] = cx(3.0, 0.0);
        d[(1, 1)] = cx(0.0, -4.0);
        assert!((operator_norm(&d).unwrap() - 4.0).abs() < 1e-14);
        // [[1, 1/2], [1/2, 1/3]]: eigenvalues (4 ± √13)/6
        let h = Mat::from_row_slice(2, 2, &[cx(1.0, 0.0), cx(0.5, 0.0), cx(0.5, 0.0), cx(1.0 / 3.0, 0.0)]);
        let expect = (4.0 + 13f64.sqrt()) / 6.0;
        assert!((operator_norm(&h).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = identity(2);
        m[(0, 1)] = cx(f64::NAN, 0.0);
        assert!(operator_norm(&m).is_err());
    }

    #[test]
    fn unitary_invariance_and_power_cross_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let m = random_gaussian(6, 6, &mut rng);
            let u = random_unitary(6, &mut rng);
            let v = random_unitary(6, &mut rng);
            let a = operator_norm(&m).unwrap();
            let b = operator_norm(&(&u * &m * &v)).unwrap();
            assert!((a - b).abs() <= 1e-9 * a);
            let p = operator_norm_power(&m, 2000);
            assert!((a - p).abs() <= 1e-6 * a, "{a} vs {p}");
        }
    }

    #[test]
    fn shift_and_json() {
        let s = shift(4);
        assert_eq!(s[(1, 0)], cx(1.0, 0.0));
        assert_eq!(s[(0, 3)], cx(0.0, 0.0));
        let j = MatJson::from_mat(&s);
        assert_eq!(j.to_mat().unwrap(), s);
        let bad = MatJson { rows: 2, cols: 2, re: vec![vec![0.0; 2]], im: vec![vec![0.0; 2]; 2] };
        assert!(bad.to_mat().is_err());
    }
}
