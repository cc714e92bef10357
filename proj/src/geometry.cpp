#include "ridge/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ridge {

namespace {

bool all_finite(std::span<const double> a) {
  for (double x : a) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

// Index of the coordinate that decides the half-sphere rule, scanning from
// the last coordinate down. Returns a.size() if every coordinate is zero.
std::size_t deciding_index(std::span<const double> a, double zero_tol) {
  for (std::size_t k = a.size(); k-- > 0;) {
    if (std::abs(a[k]) > zero_tol) return k;
  }
  return a.size();
}

void require_unit(std::span<const double> a, const char* what) {
  if (a.empty() || !all_finite(a) || std::abs(norm(a) - 1.0) > kUnitTol) {
    throw std::invalid_argument(std::string(what) + ": expected a unit vector");
  }
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

std::pair<Direction, int> canonicalize_direction(std::span<const double> a, double zero_tol) {
  if (a.empty() || !all_finite(a)) throw std::invalid_argument("degenerate direction");
  const double len = norm(a);
  if (!(len > 0.0)) throw std::invalid_argument("degenerate direction");

  Vector unit(a.begin(), a.end());
  // Leave already-unit vectors untouched so canonical input is a fixed point.
  if (std::abs(len - 1.0) > 4.0 * std::numeric_limits<double>::epsilon()) {
    for (double& x : unit) x /= len;
  }

  const std::size_t k = deciding_index(unit, zero_tol);
  if (k == unit.size()) throw std::invalid_argument("degenerate direction");

  bool snapped = false;
  for (std::size_t j = k + 1; j < unit.size(); ++j) {
    if (unit[j] != 0.0) snapped = true;
    unit[j] = 0.0;
  }
  if (snapped) {
    const double l = norm(unit);
    for (double& x : unit) x /= l;
  }

  const int sign = unit[k] > 0.0 ? 1 : -1;
  if (sign < 0) {
    // 0.0 - x rather than -x: exact zeros stay +0.0 in written files.
    for (double& x : unit) x = 0.0 - x;
  }
  return {Direction(std::move(unit)), sign};
}

Direction Direction::from_canonical(std::span<const double> coords, double zero_tol) {
  if (!in_half_sphere(coords, zero_tol)) {
    throw std::invalid_argument("direction is not on the canonical half-sphere");
  }
  return canonicalize_direction(coords, zero_tol).first;
}

bool in_half_sphere(std::span<const double> a, double zero_tol) {
  require_unit(a, "in_half_sphere");
  const std::size_t k = deciding_index(a, zero_tol);
  return k < a.size() && a[k] > 0.0;
}

Hyperplane Hyperplane::through(std::span<const double> normal, double offset, double zero_tol) {
  if (!std::isfinite(offset)) throw std::invalid_argument("hyperplane offset must be finite");
  const double len = norm(normal);
  auto [dir, sign] = canonicalize_direction(normal, zero_tol);
  return Hyperplane{std::move(dir), sign * offset / len};
}

bool Hyperplane::in_h1(double zero_tol) const { return std::abs(normal.last()) > zero_tol; }

double Hyperplane::signed_distance(std::span<const double> x) const {
  return dot(normal.coords(), x) - offset;
}

double DualHyperplane::residual(const DualPoint& p) const { return p.v - y0 - dot(p.u, z0); }

bool DualHyperplane::contains(const DualPoint& p, double tol) const {
  return std::abs(residual(p)) <= tol;
}

DualSlab::DualSlab(Vector z0_, double y1_, double y2_) : z0(std::move(z0_)), y1(y1_), y2(y2_) {
  if (std::isnan(y1) || std::isnan(y2) || !(y1 <= y2)) {
    throw std::invalid_argument("dual slab requires y1 <= y2");
  }
  if (!all_finite(z0)) throw std::invalid_argument("dual slab requires a finite z0");
}

bool DualSlab::contains(const DualPoint& p) const {
  const double s = p.v - dot(p.u, z0);
  return y1 < s && s <= y2;
}

DualPoint psi(const Hyperplane& h, double zero_tol) {
  const double last = h.normal.last();
  if (std::abs(last) <= zero_tol) throw std::invalid_argument("hyperplane not in H1");
  const std::size_t n = h.dim() - 1;
  DualPoint p;
  p.u.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.u[i] = h.normal[i] / last;
  p.v = h.offset / last;
  return p;
}

Hyperplane psi_inverse(const DualPoint& p) {
  if (!all_finite(p.u) || !std::isfinite(p.v)) {
    throw std::invalid_argument("psi_inverse: non-finite dual point");
  }
  const double c = cosine_factor(p);
  Vector a(p.u.size() + 1);
  for (std::size_t i = 0; i < p.u.size(); ++i) a[i] = p.u[i] * c;
  a.back() = c;
  return Hyperplane{Direction::from_canonical(a), p.v * c};
}

DualHyperplane dual_of_point(std::span<const double> z0, double y0) {
  return DualHyperplane{Vector(z0.begin(), z0.end()), y0};
}

double cosine_factor(const DualPoint& p) { return 1.0 / std::sqrt(1.0 + dot(p.u, p.u)); }

}  // namespace ridge
