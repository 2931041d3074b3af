#ifndef VNLAB_H
#define VNLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

// Status codes returned by every fallible entry point.
typedef enum VnStatus {
  VN_STATUS_OK = 0,
  VN_STATUS_INVALID_INPUT = 1,
  VN_STATUS_DIMENSION_MISMATCH = 2,
  VN_STATUS_TOO_LARGE = 3,
  VN_STATUS_NON_FINITE = 4,
  VN_STATUS_TOLERANCE_VIOLATED = 5,
  VN_STATUS_PARSE = 6,
  VN_STATUS_IO = 7,
  VN_STATUS_NULL_POINTER = 8,
  VN_STATUS_PANIC = 9,
} VnStatus;

// Kernel families understood by [`vn_kernel_l1`].
typedef enum VnKernel {
  // `F_a`.
  VN_KERNEL_FEJER = 0,
  // `W_a`.
  VN_KERNEL_DYADIC = 1,
  // Splitting kernel for `d = a`, band `(b, c)`.
  VN_KERNEL_SPLITTING = 2,
  // `Σ_{k=0}^a z^k`.
  VN_KERNEL_DIRICHLET = 3,
} VnKernel;

// Polynomial in `dim` variables with complex coefficients.
typedef struct VnPoly VnPoly;

// Commuting tuple of contractions.
typedef struct VnTuple VnTuple;

// Brackets for `K(m, n)`. `upper_basic1` is NaN when `m > 0`.
typedef struct VnKmnBounds {
  double lower_formula;
  double lower_hankel;
  double upper_formula;
  double upper_basic1;
  double upper_basic2;
  double upper_basic3;
  double upper_constructive;
  double best_lower;
  double best_upper;
} VnKmnBounds;

// Bounds on `C(d, n)`; logarithms stay finite where values overflow.
typedef struct VnCdnBounds {
  double trivial;
  double ln_trivial;
  double dixon;
  double ln_dixon;
  double pipeline;
  double ln_pipeline;
} VnCdnBounds;

// The three-variable counterexample.
typedef struct VnGallery {
  double op_norm;
  double sup_grid;
  double sup_certified;
  double ratio;
  double max_commutator;
  double max_contraction;
} VnGallery;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or NULL. Valid until
// the next failing call on the same thread.
const char *vn_last_error(void);

// Library version as a static NUL-terminated string.
const char *vn_version(void);

// Creates the zero polynomial in `dim` variables.
//
// # Safety
// `out` must be valid for writes.
enum VnStatus vn_poly_new(uintptr_t dim, struct VnPoly **out_poly);

// Parses the text or JSON polynomial format.
//
// # Safety
// `src` must be a NUL-terminated UTF-8 string; `out_poly` valid for writes.
enum VnStatus vn_poly_parse(const char *src, struct VnPoly **out_poly);

// Adds `re + i im` to the coefficient of `z^alpha`; `alpha` has `dim` entries.
//
// # Safety
// `poly` must come from this library; `alpha` must point to `len` values.
enum VnStatus vn_poly_add_term(struct VnPoly *poly,
                               const uint32_t *alpha,
                               uintptr_t len,
                               double re,
                               double im);

// Number of variables, or 0 for NULL.
//
// # Safety
// `poly` must be NULL or come from this library.
uintptr_t vn_poly_dim(const struct VnPoly *poly);

// Total degree, or 0 for NULL or the zero polynomial.
//
// # Safety
// `poly` must be NULL or come from this library.
uint32_t vn_poly_degree(const struct VnPoly *poly);

// Grid maximum and certified upper bound of `sup |p|` over the torus.
// `points_per_axis = 0` selects the default grid.
//
// # Safety
// `poly` must come from this library; the out pointers must be valid.
enum VnStatus vn_poly_sup_norm(const struct VnPoly *poly,
                               uintptr_t points_per_axis,
                               double *grid_max,
                               double *certified_upper);

// Releases a polynomial; NULL is ignored.
//
// # Safety
// `poly` must be NULL or come from this library and not be used afterwards.
void vn_poly_free(struct VnPoly *poly);

// Builds a tuple of `d` square matrices of order `size` from row-major
// real and imaginary parts, each `d * size * size` long (`im` may be NULL).
// Fails with `VN_STATUS_TOLERANCE_VIOLATED` if a matrix is not a contraction
// or a pair fails to commute within the given tolerances.
//
// # Safety
// `re` (and `im` unless NULL) must point to `d * size * size` values.
enum VnStatus vn_tuple_new(uintptr_t d,
                           uintptr_t size,
                           const double *re,
                           const double *im,
                           double contraction_tol,
                           double commute_tol,
                           struct VnTuple **out_tuple);

// `‖p(T)‖`.
//
// # Safety
// Handles must come from this library; `norm` must be valid for writes.
enum VnStatus vn_tuple_poly_norm(const struct VnTuple *tuple,
                                 const struct VnPoly *poly,
                                 double *norm);

// Releases a tuple; NULL is ignored.
//
// # Safety
// `tuple` must be NULL or come from this library and not be used afterwards.
void vn_tuple_free(struct VnTuple *tuple);

// Largest singular value of a row-major `rows × cols` complex matrix.
//
// # Safety
// `re` (and `im` unless NULL) must point to `rows * cols` values.
enum VnStatus vn_operator_norm(uintptr_t rows,
                               uintptr_t cols,
                               const double *re,
                               const double *im,
                               double *norm);

// # Safety
// `bounds` must be valid for writes.
enum VnStatus vn_kmn_bounds(uintptr_t m, uintptr_t n, struct VnKmnBounds *bounds);

// Trapezoidal and certified L¹ norms of a kernel.
//
// # Safety
// `quadrature` and `certified` must be valid for writes.
enum VnStatus vn_kernel_l1(enum VnKernel kind,
                           uint64_t a,
                           uint64_t b,
                           uint64_t c,
                           double *quadrature,
                           double *certified);

// # Safety
// `bounds` must be valid for writes.
enum VnStatus vn_cdn_bounds(uintptr_t d, uint32_t n, struct VnCdnBounds *bounds);

// # Safety
// `entry` must be valid for writes.
enum VnStatus vn_gallery(struct VnGallery *entry);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VNLAB_H */
