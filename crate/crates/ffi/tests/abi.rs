use std::ffi::{CStr, CString};
use std::ptr;

use vnlab_ffi::*;

fn last_error() -> String {
    let p = vn_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn polynomial_lifecycle_and_sup_norm() {
    unsafe {
        let mut p: *mut VnPoly = ptr::null_mut();
        assert_eq!(vn_poly_new(2, &mut p), VnStatus::Ok);
        assert_eq!(vn_poly_add_term(p, [1, 0].as_ptr(), 2, 1.0, 0.0), VnStatus::Ok);
        assert_eq!(vn_poly_add_term(p, [0, 1].as_ptr(), 2, 1.0, 0.0), VnStatus::Ok);
        assert_eq!(vn_poly_dim(p), 2);
        assert_eq!(vn_poly_degree(p), 1);
        let (mut g, mut c) = (0.0, 0.0);
        assert_eq!(vn_poly_sup_norm(p, 0, &mut g, &mut c), VnStatus::Ok);
        assert!((g - 2.0).abs() < 1e-12 && c >= 2.0);
        // wrong arity
        assert_eq!(vn_poly_add_term(p, [1, 0, 0].as_ptr(), 3, 1.0, 0.0), VnStatus::DimensionMismatch);
        assert!(!last_error().is_empty());
        vn_poly_free(p);
        vn_poly_free(ptr::null_mut());
    }
}

#[test]
fn parse_errors_and_null_pointers() {
    unsafe {
        let mut p: *mut VnPoly = ptr::null_mut();
        let bad = CString::new("1 x 0\n").unwrap();
        assert_eq!(vn_poly_parse(bad.as_ptr(), &mut p), VnStatus::Parse);
        assert!(p.is_null());
        assert_eq!(vn_poly_parse(ptr::null(), &mut p), VnStatus::NullPointer);
        assert!(last_error().contains("src"));
        let mut g = 0.0;
        assert_eq!(vn_poly_sup_norm(ptr::null(), 0, &mut g, &mut g), VnStatus::NullPointer);
        assert_eq!(vn_poly_dim(ptr::null()), 0);
    }
}

#[test]
fn gallery_tuple_through_the_abi() {
    unsafe {
        let src = CString::new("2 0 0 1 0\n0 2 0 1 0\n0 0 2 1 0\n1 1 0 -2 0\n1 0 1 -2 0\n0 1 1 -2 0\n").unwrap();
        let mut p: *mut VnPoly = ptr::null_mut();
        assert_eq!(vn_poly_parse(src.as_ptr(), &mut p), VnStatus::Ok);
        let s = 1.0 / 3f64.sqrt();
        let mut re = vec![0.0; 3 * 25];
        for i in 1..=3 {
            let base = (i - 1) * 25;
            re[base + i * 5] = 1.0;
            for j in 1..=3 {
                re[base + 4 * 5 + j] = if i == j { s } else { -s };
            }
        }
        let mut t: *mut VnTuple = ptr::null_mut();
        assert_eq!(vn_tuple_new(3, 5, re.as_ptr(), ptr::null(), 1e-12, 0.0, &mut t), VnStatus::Ok);
        let mut norm = 0.0;
        assert_eq!(vn_tuple_poly_norm(t, p, &mut norm), VnStatus::Ok);
        assert!((norm - 3.0 * 3f64.sqrt()).abs() < 1e-12);
        vn_tuple_free(t);
        vn_poly_free(p);

        let mut g = VnGallery::default();
        assert_eq!(vn_gallery(&mut g), VnStatus::Ok);
        assert!((g.op_norm - norm).abs() < 1e-12 && g.ratio >= 1.039);
    }
}

#[test]
fn tuple_rejects_non_contraction() {
    unsafe {
        let re = [2.0];
        let mut t: *mut VnTuple = ptr::null_mut();
        assert_eq!(vn_tuple_new(1, 1, re.as_ptr(), ptr::null(), 1e-12, 1e-12, &mut t), VnStatus::ToleranceViolated);
        assert!(t.is_null());
    }
}

#[test]
fn numeric_entry_points() {
    unsafe {
        let mut b = VnKmnBounds::default();
        assert_eq!(vn_kmn_bounds(7, 7, &mut b), VnStatus::Ok);
        assert_eq!(b.upper_formula, 1.0);
        assert!(b.upper_basic1.is_nan());
        assert_eq!(vn_kmn_bounds(5, 2, &mut b), VnStatus::InvalidInput);

        let (mut q, mut c) = (0.0, 0.0);
        assert_eq!(vn_kernel_l1(VnKernel::Fejer, 16, 0, 0, &mut q, &mut c), VnStatus::Ok);
        assert!((q - 1.0).abs() < 1e-12 && c >= q);
        assert_eq!(vn_kernel_l1(VnKernel::Splitting, 3, 60, 100, &mut q, &mut c), VnStatus::Ok);
        assert!(c <= 6.0);

        let mut cdn = VnCdnBounds::default();
        assert_eq!(vn_cdn_bounds(3, 10, &mut cdn), VnStatus::Ok);
        assert!(cdn.pipeline <= 223.0 && cdn.ln_trivial.is_finite());

        // Hilbert 2×2
        let re = [1.0, 0.5, 0.5, 1.0 / 3.0];
        let mut n = 0.0;
        assert_eq!(vn_operator_norm(2, 2, re.as_ptr(), ptr::null(), &mut n), VnStatus::Ok);
        assert!((n - (4.0 + 13f64.sqrt()) / 6.0).abs() < 1e-14);
        let nan = [f64::NAN];
        assert_eq!(vn_operator_norm(1, 1, nan.as_ptr(), ptr::null(), &mut n), VnStatus::NonFinite);
        assert!(!CStr::from_ptr(vn_version()).to_bytes().is_empty());
    }
}
