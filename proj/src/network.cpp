#include "ridge/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ridge {

void FiniteNetwork::validate() const {
  if (dim == 0) throw std::invalid_argument("network needs dim >= 1");
  if (!std::isfinite(c0)) throw std::invalid_argument("network constant must be finite");
  for (const auto& u : units) {
    if (u.a.size() != dim) {
      throw std::invalid_argument("dimension mismatch: unit has " + std::to_string(u.a.size()) +
                                  " coordinates, network has " + std::to_string(dim));
    }
    if (!std::isfinite(u.c) || !std::isfinite(u.b)) {
      throw std::invalid_argument("non-finite unit weight or offset");
    }
    if (std::abs(norm(u.a) - 1.0) > kUnitTol) {
      throw std::invalid_argument("network unit direction is not a unit vector");
    }
  }
}

RidgeEvaluator::RidgeEvaluator(const RidgeMeasure& m, const AffineTail& tail)
    : packed_(pack(m)), tail_(tail), kernels_(&active_kernels()) {
  if (tail_.a0.size() != m.dim) throw std::invalid_argument("dimension mismatch in affine tail");
}

void RidgeEvaluator::check(std::span<const double> x) const {
  if (x.size() != packed_.dim) {
    throw std::invalid_argument("dimension mismatch: point has " + std::to_string(x.size()) +
                                " coordinates, measure has " + std::to_string(packed_.dim));
  }
}

double RidgeEvaluator::value(std::span<const double> x) const {
  check(x);
  return kernels_->value(packed_.view(), x.data()) + tail_.value(x);
}

double RidgeEvaluator::derivative(std::span<const double> x) const {
  check(x);
  return kernels_->slope(packed_.view(), x.data()) + tail_.a0.back();
}

double RidgeEvaluator::slab(const DualSlab& s) const { return slab_integral(packed_, s); }

double RidgeEvaluator::half_space(const DualHyperplane& boundary, HalfSpace side) const {
  return half_space_integral(packed_, boundary, side);
}

ScalarField RidgeEvaluator::field() const {
  return [self = *this](std::span<const double> x) { return self.value(x); };
}

double eval_measure(const RidgeMeasure& m, const AffineTail& tail, std::span<const double> x) {
  return RidgeEvaluator(m, tail).value(x);
}

double eval_network(const FiniteNetwork& net, std::span<const double> x) {
  if (x.size() != net.dim) throw std::invalid_argument("dimension mismatch in eval_network");
  PackedRidge p(net.dim, net.units.size());
  for (std::size_t i = 0; i < net.units.size(); ++i) {
    const auto& u = net.units[i];
    if (u.a.size() != net.dim) throw std::invalid_argument("dimension mismatch in network unit");
    p.set(i, u.a.data(), u.b, u.c, false);
  }
  return net.c0 + active_kernels().value(p.view(), x.data());
}

double directional_derivative(const RidgeMeasure& m, std::span<const double> x) {
  return directional_derivative(m, AffineTail::zero(m.dim), x);
}

double directional_derivative(const RidgeMeasure& m, const AffineTail& tail,
                              std::span<const double> x) {
  return RidgeEvaluator(m, tail).derivative(x);
}

double fd_directional_derivative(const ScalarField& f, std::span<const double> x,
                                 std::span<const double> d, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  if (d.size() != x.size()) throw std::invalid_argument("dimension mismatch in fd derivative");
  Vector shifted(x.begin(), x.end());
  for (std::size_t k = 0; k < shifted.size(); ++k) shifted[k] += h * d[k];
  return (f(shifted) - f(x)) / h;
}

namespace {

void require_orthogonal(const Eigen::MatrixXd& r, std::size_t dim) {
  if (static_cast<std::size_t>(r.rows()) != dim || static_cast<std::size_t>(r.cols()) != dim) {
    throw std::invalid_argument("rotation has the wrong shape");
  }
  const Eigen::MatrixXd err = r.transpose() * r - Eigen::MatrixXd::Identity(r.rows(), r.cols());
  if (!(err.cwiseAbs().maxCoeff() <= 1e-10)) {
    throw std::invalid_argument("rotation matrix is not orthogonal");
  }
}

std::vector<RidgeAtom> rotate_entries(const std::vector<RidgeAtom>& in,
                                      const Eigen::MatrixXd& r, Vector& a0) {
  std::vector<RidgeAtom> out;
  out.reserve(in.size());
  const auto n = static_cast<Eigen::Index>(r.rows());
  for (const auto& e : in) {
    const Eigen::VectorXd a = r * Eigen::Map<const Eigen::VectorXd>(e.dir.coords().data(), n);
    auto [dir, sign] = canonicalize_direction(std::span<const double>(a.data(), a.size()));
    if (sign > 0) {
      out.push_back(RidgeAtom{std::move(dir), e.b, e.w});
    } else {
      for (Eigen::Index k = 0; k < n; ++k) a0[k] += e.w * a[k];
      out.push_back(RidgeAtom{std::move(dir), 0.0 - e.b, e.w});
    }
  }
  return out;
}

}  // namespace

CanonicalForm rotate_representation(const RidgeMeasure& m, const AffineTail& tail,
                                    const Eigen::MatrixXd& rotation) {
  require_orthogonal(rotation, m.dim);
  if (tail.a0.size() != m.dim) throw std::invalid_argument("dimension mismatch in affine tail");
  const auto n = static_cast<Eigen::Index>(m.dim);

  CanonicalForm out{RidgeMeasure(m.dim), AffineTail::zero(m.dim), 0};
  const Eigen::VectorXd a0 = rotation * Eigen::Map<const Eigen::VectorXd>(tail.a0.data(), n);
  for (Eigen::Index k = 0; k < n; ++k) out.tail.a0[k] = a0[k];
  out.tail.b0 = tail.b0;
  out.tail.c0 = tail.c0;
  out.measure.atoms = rotate_entries(m.atoms, rotation, out.tail.a0);
  out.measure.particles = rotate_entries(m.particles, rotation, out.tail.a0);
  return out;
}

Eigen::MatrixXd reflection_to_last_axis(std::span<const double> d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  if (n == 0 || std::abs(norm(d) - 1.0) > kUnitTol) {
    throw std::invalid_argument("reflection_to_last_axis: expected a unit vector");
  }
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(d.data(), n);
  v[n - 1] -= 1.0;
  const double vv = v.squaredNorm();
  if (vv <= 1e-30) return Eigen::MatrixXd::Identity(n, n);
  return Eigen::MatrixXd::Identity(n, n) - (2.0 / vv) * v * v.transpose();
}

double directional_derivative_along(const RidgeMeasure& m, const AffineTail& tail,
                                    std::span<const double> x, std::span<const double> d) {
  if (x.size() != m.dim || d.size() != m.dim) {
    throw std::invalid_argument("dimension mismatch in directional_derivative_along");
  }
  const Eigen::MatrixXd r = reflection_to_last_axis(d);
  const CanonicalForm g = rotate_representation(m, tail, r);
  const auto n = static_cast<Eigen::Index>(m.dim);
  const Eigen::VectorXd rx = r * Eigen::Map<const Eigen::VectorXd>(x.data(), n);
  return directional_derivative(g.measure, g.tail, std::span<const double>(rx.data(), rx.size()));
}

}  // namespace ridge
