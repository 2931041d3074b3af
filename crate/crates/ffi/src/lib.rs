//! C ABI over `vnlab`.
//!
//! Objects are opaque handles created by `*_new` / `*_parse` and released with
//! the matching `*_free`. Every fallible call returns a [`VnStatus`]; on failure
//! [`vn_last_error`] holds a message for the calling thread. Panics never cross
//! the boundary: they surface as `VN_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use vnlab::linalg::{self, cx, Mat};
use vnlab::operators::{eval_poly_tuple, MatTuple};
use vnlab::{kernels, kmn, polydisc, polynomial, MultiIndex, MultiPoly, VniError};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VnStatus {
    Ok = 0,
    InvalidInput = 1,
    DimensionMismatch = 2,
    TooLarge = 3,
    NonFinite = 4,
    ToleranceViolated = 5,
    Parse = 6,
    Io = 7,
    NullPointer = 8,
    Panic = 9,
}

impl From<&VniError> for VnStatus {
    fn from(e: &VniError) -> Self {
        match e {
            VniError::InvalidInput(_) => VnStatus::InvalidInput,
            VniError::DimensionMismatch(_) => VnStatus::DimensionMismatch,
            VniError::TooLarge { .. } => VnStatus::TooLarge,
            VniError::NonFinite(_) => VnStatus::NonFinite,
            VniError::ToleranceViolated(_) => VnStatus::ToleranceViolated,
            VniError::Parse(_) => VnStatus::Parse,
            VniError::Io(_) => VnStatus::Io,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Fail {
    Lib(VniError),
    Null(&'static str),
}

impl From<VniError> for Fail {
    fn from(e: VniError) -> Self {
        Fail::Lib(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> VnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => VnStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            let s = VnStatus::from(&e);
            set_error(e.to_string());
            s
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            VnStatus::NullPointer
        }
        Err(_) => {
            set_error("panic inside vnlab".into());
            VnStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn input<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// Message for the most recent failure on this thread, or NULL. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn vn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn vn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Polynomial in `dim` variables with complex coefficients.
pub struct VnPoly {
    inner: MultiPoly,
}

/// Creates the zero polynomial in `dim` variables.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vn_poly_new(dim: usize, out_poly: *mut *mut VnPoly) -> VnStatus {
    guard(|| {
        let slot = out(out_poly, "out_poly")?;
        let inner = MultiPoly::zero(dim)?;
        *slot = Box::into_raw(Box::new(VnPoly { inner }));
        Ok(())
    })
}

/// Parses the text or JSON polynomial format.
///
/// # Safety
/// `src` must be a NUL-terminated UTF-8 string; `out_poly` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vn_poly_parse(src: *const c_char, out_poly: *mut *mut VnPoly) -> VnStatus {
    guard(|| {
        let slot = out(out_poly, "out_poly")?;
        let s = CStr::from_ptr(input(src, "src")?).to_str().map_err(|e| VniError::Parse(e.to_string()))?;
        let inner = MultiPoly::parse_any(s)?;
        *slot = Box::into_raw(Box::new(VnPoly { inner }));
        Ok(())
    })
}

/// Adds `re + i im` to the coefficient of `z^alpha`; `alpha` has `dim` entries.
///
/// # Safety
/// `poly` must come from this library; `alpha` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn vn_poly_add_term(
    poly: *mut VnPoly,
    alpha: *const u32,
    len: usize,
    re: f64,
    im: f64,
) -> VnStatus {
    guard(|| {
        let p = out(poly, "poly")?;
        let a = MultiIndex::new(slice(alpha, len, "alpha")?.to_vec())?;
        p.inner.add_term(a, cx(re, im))?;
        Ok(())
    })
}

/// Number of variables, or 0 for NULL.
///
/// # Safety
/// `poly` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn vn_poly_dim(poly: *const VnPoly) -> usize {
    poly.as_ref().map_or(0, |p| p.inner.dim())
}

/// Total degree, or 0 for NULL or the zero polynomial.
///
/// # Safety
/// `poly` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn vn_poly_degree(poly: *const VnPoly) -> u32 {
    poly.as_ref().map_or(0, |p| p.inner.degree())
}

/// Grid maximum and certified upper bound of `sup |p|` over the torus.
/// `points_per_axis = 0` selects the default grid.
///
/// # Safety
/// `poly` must come from this library; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn vn_poly_sup_norm(
    poly: *const VnPoly,
    points_per_axis: usize,
    grid_max: *mut f64,
    certified_upper: *mut f64,
) -> VnStatus {
    guard(|| {
        let p = &input(poly, "poly")?.inner;
        let (g, c) = (out(grid_max, "grid_max")?, out(certified_upper, "certified_upper")?);
        let pts = if points_per_axis == 0 { polynomial::default_points_per_axis(p) } else { points_per_axis };
        let e = polynomial::sup_norm(p, pts)?;
        *g = e.grid_max;
        *c = e.certified_upper;
        Ok(())
    })
}

/// Releases a polynomial; NULL is ignored.
///
/// # Safety
/// `poly` must be NULL or come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn vn_poly_free(poly: *mut VnPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Commuting tuple of contractions.
pub struct VnTuple {
    inner: MatTuple,
}

/// Builds a tuple of `d` square matrices of order `size` from row-major
/// real and imaginary parts, each `d * size * size` long (`im` may be NULL).
/// Fails with `VN_STATUS_TOLERANCE_VIOLATED` if a matrix is not a contraction
/// or a pair fails to commute within the given tolerances.
///
/// # Safety
/// `re` (and `im` unless NULL) must point to `d * size * size` values.
#[no_mangle]
pub unsafe extern "C" fn vn_tuple_new(
    d: usize,
    size: usize,
    re: *const f64,
    im: *const f64,
    contraction_tol: f64,
    commute_tol: f64,
    out_tuple: *mut *mut VnTuple,
) -> VnStatus {
    guard(|| {
        let slot = out(out_tuple, "out_tuple")?;
        let len = d
            .checked_mul(size)
            .and_then(|x| x.checked_mul(size))
            .ok_or(VniError::TooLarge { dim: size, cap: linalg::MAX_DIM })?;
        let re = slice(re, len, "re")?;
        let im = if im.is_null() { None } else { Some(slice(im, len, "im")?) };
        let mats = (0..d)
            .map(|k| {
                Mat::from_fn(size, size, |i, j| {
                    let idx = k * size * size + i * size + j;
                    cx(re[idx], im.map_or(0.0, |v| v[idx]))
                })
            })
            .collect();
        let inner = MatTuple::new(mats, contraction_tol, commute_tol)?;
        *slot = Box::into_raw(Box::new(VnTuple { inner }));
        Ok(())
    })
}

/// `‖p(T)‖`.
///
/// # Safety
/// Handles must come from this library; `norm` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vn_tuple_poly_norm(tuple: *const VnTuple, poly: *const VnPoly, norm: *mut f64) -> VnStatus {
    guard(|| {
        let t = &input(tuple, "tuple")?.inner;
        let p = &input(poly, "poly")?.inner;
        let slot = out(norm, "norm")?;
        *slot = linalg::operator_norm(&eval_poly_tuple(p, t)?.value)?;
        Ok(())
    })
}

/// Releases a tuple; NULL is ignored.
///
/// # Safety
/// `tuple` must be NULL or come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn vn_tuple_free(tuple: *mut VnTuple) {
    if !tuple.is_null() {
        drop(Box::from_raw(tuple));
    }
}

/// Largest singular value of a row-major `rows × cols` complex matrix.
///
/// # Safety
/// `re` (and `im` unless NULL) must point to `rows * cols` values.
#[no_mangle]
pub unsafe extern "C" fn vn_operator_norm(
    rows: usize,
    cols: usize,
    re: *const f64,
    im: *const f64,
    norm: *mut f64,
) -> VnStatus {
    guard(|| {
        let slot = out(norm, "norm")?;
        let len = rows.checked_mul(cols).ok_or(VniError::TooLarge { dim: rows.max(cols), cap: linalg::MAX_DIM })?;
        let re = slice(re, len, "re")?;
        let im = if im.is_null() { None } else { Some(slice(im, len, "im")?) };
        let m = Mat::from_fn(rows, cols, |i, j| cx(re[i * cols + j], im.map_or(0.0, |v| v[i * cols + j])));
        *slot = linalg::operator_norm(&m)?;
        Ok(())
    })
}

/// Brackets for `K(m, n)`. `upper_basic1` is NaN when `m > 0`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct VnKmnBounds {
    pub lower_formula: f64,
    pub lower_hankel: f64,
    pub upper_formula: f64,
    pub upper_basic1: f64,
    pub upper_basic2: f64,
    pub upper_basic3: f64,
    pub upper_constructive: f64,
    pub best_lower: f64,
    pub best_upper: f64,
}

/// # Safety
/// `bounds` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vn_kmn_bounds(m: usize, n: usize, bounds: *mut VnKmnBounds) -> VnStatus {
    guard(|| {
        let slot = out(bounds, "bounds")?;
        let b = kmn::kmn_bounds(m, n)?;
        *slot = VnKmnBounds {
            lower_formula: b.lower_formula,
            lower_hankel: b.lower_hankel,
            upper_formula: b.upper_formula,
            upper_basic1: b.upper_basic1.unwrap_or(f64::NAN),
            upper_basic2: b.upper_basic2,
            upper_basic3: b.upper_basic3,
            upper_constructive: b.upper_constructive,
            best_lower: b.best_lower(),
            best_upper: b.best_upper(),
        };
        Ok(())
    })
}

/// Kernel families understood by [`vn_kernel_l1`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VnKernel {
    /// `F_a`.
    Fejer = 0,
    /// `W_a`.
    Dyadic = 1,
    /// Splitting kernel for `d = a`, band `(b, c)`.
    Splitting = 2,
    /// `Σ_{k=0}^a z^k`.
    Dirichlet = 3,
}

/// Trapezoidal and certified L¹ norms of a kernel.
///
/// # Safety
/// `quadrature` and `certified` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vn_kernel_l1(
    kind: VnKernel,
    a: u64,
    b: u64,
    c: u64,
    quadrature: *mut f64,
    certified: *mut f64,
) -> VnStatus {
    guard(|| {
        let (q, cert) = (out(quadrature, "quadrature")?, out(certified, "certified")?);
        let k = match kind {
            VnKernel::Fejer => kernels::fejer(a)?,
            VnKernel::Dyadic => {
                let n = u32::try_from(a).map_err(|_| VniError::InvalidInput(format!("dyadic index {a} too large")))?;
                if n > 24 {
                    return Err(VniError::TooLarge { dim: n as usize, cap: 24 }.into());
                }
                kernels::dyadic_w(n)
            }
            VnKernel::Splitting => kernels::splitting_kernel(a as usize, b, c)?,
            VnKernel::Dirichlet => kernels::dirichlet(a),
        };
        *q = kernels::l1_norm_default(&k)?;
        *cert = kernels::l1_norm_upper_auto(&k)?;
        Ok(())
    })
}

/// Bounds on `C(d, n)`; logarithms stay finite where values overflow.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct VnCdnBounds {
    pub trivial: f64,
    pub ln_trivial: f64,
    pub dixon: f64,
    pub ln_dixon: f64,
    pub pipeline: f64,
    pub ln_pipeline: f64,
}

/// # Safety
/// `bounds` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vn_cdn_bounds(d: usize, n: u32, bounds: *mut VnCdnBounds) -> VnStatus {
    guard(|| {
        let slot = out(bounds, "bounds")?;
        let row = polydisc::cdn_bounds(d, n)?;
        let get = |name: &str| row.get(name).map(|b| (b.value, b.ln_value)).unwrap_or((f64::NAN, f64::NAN));
        let ((t, lt), (x, lx), (p, lp)) = (get("trivial"), get("dixon"), get("pipeline"));
        *slot = VnCdnBounds { trivial: t, ln_trivial: lt, dixon: x, ln_dixon: lx, pipeline: p, ln_pipeline: lp };
        Ok(())
    })
}

/// The three-variable counterexample.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct VnGallery {
    pub op_norm: f64,
    pub sup_grid: f64,
    pub sup_certified: f64,
    pub ratio: f64,
    pub max_commutator: f64,
    pub max_contraction: f64,
}

/// # Safety
/// `entry` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vn_gallery(entry: *mut VnGallery) -> VnStatus {
    guard(|| {
        let slot = out(entry, "entry")?;
        let g = polydisc::counterexample_gallery()?;
        let e = g.first().ok_or_else(|| VniError::InvalidInput("empty gallery".into()))?;
        *slot = VnGallery {
            op_norm: e.op_norm,
            sup_grid: e.sup.grid_max,
            sup_certified: e.sup.certified_upper,
            ratio: e.ratio,
            max_commutator: e.max_commutator,
            max_contraction: e.max_contraction,
        };
        Ok(())
    })
}
