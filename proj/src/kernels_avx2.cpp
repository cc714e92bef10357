// AVX2 variants. This file is compiled with -mavx2 and must only be entered
// after a runtime CPU check (see kernels.cpp).

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace ridge::detail {

namespace {

inline __m256d dot4(const PackedView& p, std::size_t i, const double* x, std::size_t upto) {
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t k = 0; k < upto; ++k) {
    const __m256d c = _mm256_loadu_pd(p.coords + k * p.padded + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(c, _mm256_set1_pd(x[k])));
  }
  return acc;
}

inline double hsum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

}  // namespace

double value_avx2(const PackedView& p, const double* x) {
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = zero;
  for (std::size_t i = 0; i < p.padded; i += 4) {
    const __m256d t = _mm256_sub_pd(dot4(p, i, x, p.dim), _mm256_loadu_pd(p.offset + i));
    // relu(t) written as a blend so that NaN behaviour matches the scalar
    // `t > 0 ? t : 0`.
    const __m256d r = _mm256_and_pd(_mm256_cmp_pd(t, zero, _CMP_GT_OQ), t);
    const __m256d term = _mm256_mul_pd(_mm256_loadu_pd(p.weight + i),
                                       _mm256_sub_pd(r, _mm256_loadu_pd(p.anchor + i)));
    acc = _mm256_add_pd(acc, term);
  }
  return hsum(acc);
}

double slope_avx2(const PackedView& p, const double* x) {
  __m256d acc = _mm256_setzero_pd();
  const double* last = p.coords + (p.dim - 1) * p.padded;
  for (std::size_t i = 0; i < p.padded; i += 4) {
    const __m256d mask =
        _mm256_cmp_pd(dot4(p, i, x, p.dim), _mm256_loadu_pd(p.offset + i), _CMP_GE_OQ);
    const __m256d term = _mm256_mul_pd(_mm256_loadu_pd(p.weight + i), _mm256_loadu_pd(last + i));
    acc = _mm256_add_pd(acc, _mm256_and_pd(mask, term));
  }
  return hsum(acc);
}

double band_avx2(const PackedView& p, const double* z0, double y_lo, double y_hi) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d ylo = _mm256_set1_pd(y_lo);
  const __m256d yhi = _mm256_set1_pd(y_hi);
  const double* last = p.coords + (p.dim - 1) * p.padded;
  __m256d acc = zero;
  for (std::size_t i = 0; i < p.padded; i += 4) {
    const __m256d c = _mm256_loadu_pd(last + i);
    const __m256d b = _mm256_loadu_pd(p.offset + i);
    const __m256d base = dot4(p, i, z0, p.dim - 1);
    const __m256d lo = _mm256_add_pd(base, _mm256_mul_pd(c, ylo));
    const __m256d hi = _mm256_add_pd(base, _mm256_mul_pd(c, yhi));
    __m256d mask = _mm256_cmp_pd(c, zero, _CMP_NEQ_OQ);
    mask = _mm256_and_pd(mask, _mm256_cmp_pd(lo, b, _CMP_LT_OQ));
    mask = _mm256_and_pd(mask, _mm256_cmp_pd(b, hi, _CMP_LE_OQ));
    const __m256d term = _mm256_mul_pd(_mm256_loadu_pd(p.weight + i), c);
    acc = _mm256_add_pd(acc, _mm256_and_pd(mask, term));
  }
  return hsum(acc);
}

double side_avx2(const PackedView& p, const double* x, HalfSpace which) {
  const __m256d zero = _mm256_setzero_pd();
  const double* last = p.coords + (p.dim - 1) * p.padded;
  __m256d acc = zero;
  for (std::size_t i = 0; i < p.padded; i += 4) {
    const __m256d c = _mm256_loadu_pd(last + i);
    const __m256d b = _mm256_loadu_pd(p.offset + i);
    const __m256d d = dot4(p, i, x, p.dim);
    __m256d mask = _mm256_cmp_pd(c, zero, _CMP_NEQ_OQ);
    mask = _mm256_and_pd(mask, which == HalfSpace::Above ? _mm256_cmp_pd(b, d, _CMP_GT_OQ)
                                                         : _mm256_cmp_pd(b, d, _CMP_LT_OQ));
    const __m256d term = _mm256_mul_pd(_mm256_loadu_pd(p.weight + i), c);
    acc = _mm256_add_pd(acc, _mm256_and_pd(mask, term));
  }
  return hsum(acc);
}

}  // namespace ridge::detail
