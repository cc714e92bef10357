#include "ridge/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "kernels_impl.hpp"

namespace ridge {

PackedRidge::PackedRidge(std::size_t dim_, std::size_t count_)
    : dim(dim_), count(count_), padded((count_ + kPackWidth - 1) / kPackWidth * kPackWidth) {
  if (dim == 0) throw std::invalid_argument("packed ridge entries need dim >= 1");
  coords.assign(dim * padded, 0.0);
  offset.assign(padded, 0.0);
  weight.assign(padded, 0.0);
  anchor.assign(padded, 0.0);
}

void PackedRidge::set(std::size_t i, const double* a, double b, double w, bool anchored) {
  for (std::size_t k = 0; k < dim; ++k) coords[k * padded + i] = a[k];
  offset[i] = b;
  weight[i] = w;
  anchor[i] = anchored && b < 0.0 ? -b : 0.0;
}

namespace {

bool cpu_has_avx2() {
#if defined(RIDGE_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& choose() {
  const char* env = std::getenv("RIDGE_KERNELS");
  if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable* avx2_kernels() {
#if defined(RIDGE_HAVE_AVX2_TU)
  static const KernelTable table{"avx2", detail::value_avx2, detail::slope_avx2,
                                 detail::band_avx2, detail::side_avx2};
  static const bool supported = cpu_has_avx2();
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable& table = choose();
  return table;
}

}  // namespace ridge
