#include "ridge/kernels.hpp"

#include "kernels_impl.hpp"

namespace ridge {

namespace {

inline double relu(double t) { return t > 0.0 ? t : 0.0; }

// Dot product over the first `upto` coordinates of entry i.
inline double partial_dot(const PackedView& p, std::size_t i, const double* x, std::size_t upto) {
  double acc = 0.0;
  for (std::size_t k = 0; k < upto; ++k) acc += p.coords[k * p.padded + i] * x[k];
  return acc;
}

inline double last_coord(const PackedView& p, std::size_t i) {
  return p.coords[(p.dim - 1) * p.padded + i];
}

}  // namespace

namespace detail {

double value_scalar(const PackedView& p, const double* x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.padded; ++i) {
    const double t = partial_dot(p, i, x, p.dim) - p.offset[i];
    acc += p.weight[i] * (relu(t) - p.anchor[i]);
  }
  return acc;
}

double slope_scalar(const PackedView& p, const double* x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.padded; ++i) {
    if (partial_dot(p, i, x, p.dim) >= p.offset[i]) acc += p.weight[i] * last_coord(p, i);
  }
  return acc;
}

double band_scalar(const PackedView& p, const double* z0, double y_lo, double y_hi) {
  double acc = 0.0;
  const std::size_t n = p.dim - 1;
  for (std::size_t i = 0; i < p.padded; ++i) {
    const double c = last_coord(p, i);
    if (c == 0.0) continue;
    const double base = partial_dot(p, i, z0, n);
    const double lo = base + c * y_lo;
    const double hi = base + c * y_hi;
    if (lo < p.offset[i] && p.offset[i] <= hi) acc += p.weight[i] * c;
  }
  return acc;
}

double side_scalar(const PackedView& p, const double* x, HalfSpace which) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.padded; ++i) {
    const double c = last_coord(p, i);
    if (c == 0.0) continue;
    const double d = partial_dot(p, i, x, p.dim);
    const bool in = which == HalfSpace::Above ? p.offset[i] > d : p.offset[i] < d;
    if (in) acc += p.weight[i] * c;
  }
  return acc;
}

}  // namespace detail

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", detail::value_scalar, detail::slope_scalar,
                                 detail::band_scalar, detail::side_scalar};
  return table;
}

}  // namespace ridge
