#pragma once

// Pointwise evaluation of integral and finite-width representations and the
// one-sided directional derivative in the e_{n+1} direction.

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "ridge/geometry.hpp"
#include "ridge/kernels.hpp"
#include "ridge/measure.hpp"

namespace ridge {

/// A black-box scalar field on R^{n+1}.
using ScalarField = std::function<double(std::span<const double>)>;

struct NetworkUnit {
  double c = 0.0;
  Vector a;  // unit norm
  double b = 0.0;
};

/// c0 + sum_i c_i relu(a_i . x - b_i).
struct FiniteNetwork {
  std::size_t dim = 0;
  double c0 = 0.0;
  std::vector<NetworkUnit> units;

  /// Throws std::invalid_argument on dimension mismatch, non-unit
  /// directions or non-finite values.
  void validate() const;
};

/// Measure plus tail, packed once for repeated queries. Use this instead of
/// the free functions when evaluating many points.
class RidgeEvaluator {
 public:
  RidgeEvaluator(const RidgeMeasure& m, const AffineTail& tail);

  std::size_t dim() const { return packed_.dim; }
  double value(std::span<const double> x) const;
  /// D_{e_{n+1}+} f(x), including the tail's contribution a0 . e_{n+1}.
  double derivative(std::span<const double> x) const;
  double slab(const DualSlab& s) const;
  double half_space(const DualHyperplane& boundary, HalfSpace side) const;
  ScalarField field() const;

 private:
  void check(std::span<const double> x) const;

  PackedRidge packed_;
  AffineTail tail_;
  const KernelTable* kernels_;
};

double eval_measure(const RidgeMeasure& m, const AffineTail& tail, std::span<const double> x);

double eval_network(const FiniteNetwork& net, std::span<const double> x);

/// Sum over entries with dir . x >= b of w * (dir . e_{n+1}). The boundary is
/// closed, which makes this the right derivative at creases.
double directional_derivative(const RidgeMeasure& m, std::span<const double> x);
/// As above plus tail.a0 . e_{n+1}.
double directional_derivative(const RidgeMeasure& m, const AffineTail& tail,
                              std::span<const double> x);

/// (f(x + h d) - f(x)) / h.
double fd_directional_derivative(const ScalarField& f, std::span<const double> x,
                                 std::span<const double> d, double h = 1e-7);

/// Representation of g(x) = f(R^T x). Directions map a -> R a and are folded
/// back onto the half-sphere, with the fold corrections going into the tail.
/// Throws std::invalid_argument unless R^T R = I within 1e-10.
CanonicalForm rotate_representation(const RidgeMeasure& m, const AffineTail& tail,
                                    const Eigen::MatrixXd& rotation);

/// Orthogonal (Householder) matrix mapping the unit vector d to e_{n+1}.
Eigen::MatrixXd reflection_to_last_axis(std::span<const double> d);

/// One-sided derivative of f at x along an arbitrary unit vector d, computed
/// by reflecting d onto e_{n+1} and using the closed-form derivative there.
double directional_derivative_along(const RidgeMeasure& m, const AffineTail& tail,
                                    std::span<const double> x, std::span<const double> d);

}  // namespace ridge
