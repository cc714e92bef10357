#pragma once

// Finite-width networks from the atomic part of a canonical representation,
// and diagnostics on the resulting networks.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ridge/geometry.hpp"
#include "ridge/measure.hpp"
#include "ridge/network.hpp"

namespace ridge {

/// Raised when the particle part is too heavy for a finite-width network.
class ResidualError : public std::runtime_error {
 public:
  ResidualError(double residual_tv, double tolerance);
  double residual_tv() const { return residual_tv_; }
  double tolerance() const { return tolerance_; }

 private:
  double residual_tv_;
  double tolerance_;
};

/// max(1e-9 * TV(m), 1e-12)
double default_residual_tol(const RidgeMeasure& m);

/// Units are the atoms; the tail's a0 . x becomes the pair
/// |a0| relu(a0_hat . x) - |a0| relu(-a0_hat . x); the constant is
/// b0 + c0 - sum_atoms w relu(-b). Units with matching (a, b) are merged.
/// Throws ResidualError when TV(particles) > residual_tol.
FiniteNetwork extract_finite_network(const RidgeMeasure& m, const AffineTail& tail,
                                     std::optional<double> residual_tol = std::nullopt,
                                     const Tolerances& tol = {});

/// One atom per unit (folded when the unit direction is not canonical), with
/// c relu(-b) moved into the constant. The induced function equals the
/// network's.
CanonicalForm network_to_measure(const FiniteNetwork& net, const Tolerances& tol = {});

/// Hyperplanes across which the network is not affine: units are grouped by
/// canonical hyperplane and groups with nonzero merged weight are returned.
std::vector<Hyperplane> crease_hyperplanes(const FiniteNetwork& net, const Tolerances& tol = {});

enum class FarField { IdenticallyZero, NonzeroFarField };

struct CompactSupportVerdict {
  FarField kind = FarField::IdenticallyZero;
  double max_abs = 0.0;
  double threshold = 0.0;
  std::size_t rays = 0;
};

/// Samples |f| at radius * u for `rays` random unit vectors u. A nonzero
/// finite network on R^d, d >= 2, is never compactly supported, so a nonzero
/// network should always report NonzeroFarField there.
CompactSupportVerdict compact_support_diagnostic(const FiniteNetwork& net, double radius,
                                                 std::size_t rays = 100,
                                                 std::uint64_t seed = 0, double tol = 1e-9);

const char* to_string(FarField f);

}  // namespace ridge
