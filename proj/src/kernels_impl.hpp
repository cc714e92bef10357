#pragma once

// Per-variant kernel entry points, shared between the dispatch unit and the
// variant translation units.

#include "ridge/kernels.hpp"

namespace ridge::detail {

double value_scalar(const PackedView& p, const double* x);
double slope_scalar(const PackedView& p, const double* x);
double band_scalar(const PackedView& p, const double* z0, double y_lo, double y_hi);
double side_scalar(const PackedView& p, const double* x, HalfSpace which);

#if defined(RIDGE_HAVE_AVX2_TU)
double value_avx2(const PackedView& p, const double* x);
double slope_avx2(const PackedView& p, const double* x);
double band_avx2(const PackedView& p, const double* z0, double y_lo, double y_hi);
double side_avx2(const PackedView& p, const double* x, HalfSpace which);
#endif

}  // namespace ridge::detail
