#include <math.h>
#include <stdio.h>
#include "vnlab.h"

int main(void) {
    VnPoly *p = NULL;
    if (vn_poly_parse("1 0 1 0\n0 1 1 0\n", &p) != VN_STATUS_OK) return 1;
    double g = 0, c = 0;
    if (vn_poly_sup_norm(p, 0, &g, &c) != VN_STATUS_OK) return 2;
    if (fabs(g - 2.0) > 1e-12 || c < 2.0) return 3;
    vn_poly_free(p);

    VnKmnBounds b;
    if (vn_kmn_bounds(3, 2, &b) != VN_STATUS_INVALID_INPUT) return 4;
    if (vn_last_error() == NULL) return 5;

    VnGallery e;
    if (vn_gallery(&e) != VN_STATUS_OK || e.ratio < 1.039) return 6;
    printf("vnlab %s: gallery ratio %.6f\n", vn_version(), e.ratio);
    return 0;
}
