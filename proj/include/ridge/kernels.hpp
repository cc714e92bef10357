#pragma once

// Inner loops over ridge entries (direction a, offset b, weight w).
//
// Entries are packed structure-of-arrays, coordinate-major, padded with zero
// entries to a multiple of kPackWidth. Every kernel evaluates the dot product
// a . x sequentially over coordinates in the same order, in every variant, so
// the per-entry comparisons against b are bitwise identical between the
// scalar reference and the SIMD variants. Only the summation order differs.
//
// Padding entries have a = 0, b = 0, w = 0 and contribute exactly zero.

#include <cstddef>
#include <string_view>
#include <vector>

namespace ridge {

inline constexpr std::size_t kPackWidth = 4;

/// Non-owning view the kernels consume. Raw pointers keep the SIMD
/// translation unit free of template instantiations.
struct PackedView {
  std::size_t dim = 0;
  std::size_t padded = 0;
  const double* coords = nullptr;  // dim * padded, coordinate-major
  const double* offset = nullptr;  // b
  const double* weight = nullptr;  // w
  const double* anchor = nullptr;  // subtracted per entry: relu(-b) or 0
};

struct PackedRidge {
  std::size_t dim = 0;
  std::size_t count = 0;
  std::size_t padded = 0;
  std::vector<double> coords;
  std::vector<double> offset;
  std::vector<double> weight;
  std::vector<double> anchor;

  PackedRidge() = default;
  PackedRidge(std::size_t dim, std::size_t count);

  /// Sets entry i. When `anchored`, relu(-b) is subtracted from the entry's
  /// ridge value (the integral-representation convention); otherwise the
  /// entry is a plain unit w * relu(a . x - b).
  void set(std::size_t i, const double* a, double b, double w, bool anchored);

  PackedView view() const {
    return PackedView{dim, padded, coords.data(), offset.data(), weight.data(), anchor.data()};
  }
};

enum class HalfSpace { Above, Below };

/// One implementation of every kernel.
struct KernelTable {
  std::string_view name;

  /// sum_i w_i * (relu(a_i . x - b_i) - anchor_i)
  double (*value)(const PackedView& p, const double* x);

  /// sum over entries with a_i . x >= b_i of w_i * a_i[last]
  double (*slope)(const PackedView& p, const double* x);

  /// sum over entries with a_i[last] != 0 and
  /// a_i . (z0, y_lo) < b_i <= a_i . (z0, y_hi) of w_i * a_i[last].
  /// z0 has dim - 1 entries; y_lo may be -inf and y_hi +inf.
  double (*band)(const PackedView& p, const double* z0, double y_lo, double y_hi);

  /// sum over entries with a_i[last] != 0 and b_i > a_i . x (Above) or
  /// b_i < a_i . x (Below) of w_i * a_i[last].
  double (*side)(const PackedView& p, const double* x, HalfSpace which);
};

const KernelTable& scalar_kernels();

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// The table used by the library. Chosen once on first use: AVX2 when
/// available, unless the environment variable RIDGE_KERNELS=scalar.
const KernelTable& active_kernels();

}  // namespace ridge
