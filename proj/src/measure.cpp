#include "ridge/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ridge {

namespace {

void check_entry(const EuclideanEntry& e, std::size_t dim) {
  if (e.a.size() != dim) {
    throw std::invalid_argument("dimension mismatch: entry has " + std::to_string(e.a.size()) +
                                " coordinates, measure has " + std::to_string(dim));
  }
  for (double x : e.a) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite direction coordinate");
  }
  if (!std::isfinite(e.b) || !std::isfinite(e.w)) {
    throw std::invalid_argument("non-finite offset or weight");
  }
}

void check_atom(const RidgeAtom& e, std::size_t dim) {
  if (e.dir.dim() != dim) throw std::invalid_argument("dimension mismatch in ridge measure");
  if (!std::isfinite(e.b) || !std::isfinite(e.w)) {
    throw std::invalid_argument("non-finite offset or weight");
  }
}

std::vector<EuclideanEntry> normalize_entries(const std::vector<EuclideanEntry>& in,
                                              std::size_t dim, const Tolerances& tol,
                                              std::size_t& dropped) {
  std::vector<EuclideanEntry> out;
  out.reserve(in.size());
  for (const auto& e : in) {
    check_entry(e, dim);
    const double len = norm(e.a);
    if (len <= tol.zero) {
      ++dropped;
      continue;
    }
    if (std::abs(len - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon()) {
      out.push_back(e);
      continue;
    }
    EuclideanEntry n{e.a, e.b / len, e.w * len};
    for (double& x : n.a) x /= len;
    out.push_back(std::move(n));
  }
  return out;
}

std::vector<RidgeAtom> fold_entries(const std::vector<EuclideanEntry>& in, std::size_t dim,
                                    const Tolerances& tol, Vector& a0) {
  std::vector<RidgeAtom> out;
  out.reserve(in.size());
  for (const auto& e : in) {
    check_entry(e, dim);
    if (std::abs(norm(e.a) - 1.0) > kUnitTol) {
      throw std::invalid_argument("fold_to_half_sphere: entry direction is not a unit vector");
    }
    auto [dir, sign] = canonicalize_direction(e.a, tol.zero);
    if (sign > 0) {
      out.push_back(RidgeAtom{std::move(dir), e.b, e.w});
      continue;
    }
    // w (relu(a.x - b) - relu(-b)) = w (relu(-a.x + b) - relu(b)) + w a.x
    for (std::size_t k = 0; k < dim; ++k) a0[k] += e.w * e.a[k];
    out.push_back(RidgeAtom{std::move(dir), 0.0 - e.b, e.w});
  }
  return out;
}

bool lex_less(const RidgeAtom& x, const RidgeAtom& y) {
  for (std::size_t k = 0; k < x.dir.dim(); ++k) {
    if (x.dir[k] != y.dir[k]) return x.dir[k] < y.dir[k];
  }
  return x.b < y.b;
}

bool close(const RidgeAtom& x, const RidgeAtom& y, double eps) {
  if (std::abs(x.b - y.b) > eps) return false;
  for (std::size_t k = 0; k < x.dir.dim(); ++k) {
    if (std::abs(x.dir[k] - y.dir[k]) > eps) return false;
  }
  return true;
}

}  // namespace

void RidgeMeasure::validate() const {
  if (dim == 0) throw std::invalid_argument("ridge measure needs dim >= 1");
  for (const auto& e : atoms) check_atom(e, dim);
  for (const auto& e : particles) check_atom(e, dim);
}

double AffineTail::value(std::span<const double> x) const { return dot(a0, x) + b0 + c0; }

SphereMeasure normalize_from_euclidean(const EuclideanMeasure& t, const Tolerances& tol) {
  if (t.dim == 0) throw std::invalid_argument("measure needs dim >= 1");
  SphereMeasure out;
  out.dim = t.dim;
  out.atoms = normalize_entries(t.atoms, t.dim, tol, out.dropped);
  out.particles = normalize_entries(t.particles, t.dim, tol, out.dropped);
  return out;
}

CanonicalForm fold_to_half_sphere(const SphereMeasure& m, const Tolerances& tol) {
  if (m.dim == 0) throw std::invalid_argument("measure needs dim >= 1");
  CanonicalForm out{RidgeMeasure(m.dim), AffineTail::zero(m.dim), m.dropped};
  out.measure.atoms = fold_entries(m.atoms, m.dim, tol, out.tail.a0);
  out.measure.particles = fold_entries(m.particles, m.dim, tol, out.tail.a0);
  return out;
}

std::vector<RidgeAtom> merge_atoms(std::vector<RidgeAtom> atoms, const Tolerances& tol) {
  std::sort(atoms.begin(), atoms.end(), lex_less);
  std::vector<RidgeAtom> merged;
  merged.reserve(atoms.size());
  for (auto& a : atoms) {
    bool joined = false;
    // Sorted on the first coordinate, so candidates are a suffix of `merged`.
    for (std::size_t j = merged.size(); j-- > 0;) {
      if (merged[j].dir[0] < a.dir[0] - tol.merge) break;
      if (close(merged[j], a, tol.merge)) {
        merged[j].w += a.w;
        joined = true;
        break;
      }
    }
    if (!joined) merged.push_back(std::move(a));
  }
  std::erase_if(merged, [&](const RidgeAtom& a) { return std::abs(a.w) < tol.weight; });
  return merged;
}

CanonicalForm canonicalize_full(const EuclideanMeasure& t, const AffineTail& tail,
                                const Tolerances& tol) {
  if (tail.a0.size() != t.dim) throw std::invalid_argument("dimension mismatch in affine tail");
  CanonicalForm out = fold_to_half_sphere(normalize_from_euclidean(t, tol), tol);
  for (std::size_t k = 0; k < t.dim; ++k) out.tail.a0[k] += tail.a0[k];
  out.tail.b0 = tail.b0;
  out.tail.c0 = tail.c0;
  out.measure.atoms = merge_atoms(std::move(out.measure.atoms), tol);
  std::erase_if(out.measure.particles,
                [&](const RidgeAtom& a) { return std::abs(a.w) < tol.weight; });
  return out;
}

CanonicalForm canonicalize_full(const EuclideanMeasure& t, double c0, const Tolerances& tol) {
  AffineTail tail = AffineTail::zero(t.dim);
  tail.c0 = c0;
  return canonicalize_full(t, tail, tol);
}

std::pair<RidgeMeasure, RidgeMeasure> decompose(const RidgeMeasure& m) {
  RidgeMeasure atomic(m.dim);
  RidgeMeasure residual(m.dim);
  atomic.atoms = m.atoms;
  residual.particles = m.particles;
  return {std::move(atomic), std::move(residual)};
}

double total_variation(const std::vector<RidgeAtom>& entries) {
  double tv = 0.0;
  for (const auto& e : entries) tv += std::abs(e.w);
  return tv;
}

double total_variation(const RidgeMeasure& m) {
  return total_variation(m.atoms) + total_variation(m.particles);
}

PackedRidge pack(const RidgeMeasure& m, bool anchored) {
  PackedRidge p(m.dim, m.size());
  std::size_t i = 0;
  for (const auto* list : {&m.atoms, &m.particles}) {
    for (const auto& e : *list) {
      if (e.dir.dim() != m.dim) throw std::invalid_argument("dimension mismatch in ridge measure");
      p.set(i++, e.dir.coords().data(), e.b, e.w, anchored);
    }
  }
  return p;
}

double slab_integral(const PackedRidge& p, const DualSlab& s) {
  if (s.z0.size() + 1 != p.dim) throw std::invalid_argument("dimension mismatch in dual slab");
  return active_kernels().band(p.view(), s.z0.data(), s.y1, s.y2);
}

double slab_integral(const RidgeMeasure& m, const DualSlab& s) {
  return slab_integral(pack(m), s);
}

double half_space_integral(const PackedRidge& p, const DualHyperplane& boundary, HalfSpace side) {
  if (boundary.z0.size() + 1 != p.dim) {
    throw std::invalid_argument("dimension mismatch in dual hyperplane");
  }
  Vector x(boundary.z0);
  x.push_back(boundary.y0);
  return active_kernels().side(p.view(), x.data(), side);
}

double half_space_integral(const RidgeMeasure& m, const DualHyperplane& boundary,
                           HalfSpace side) {
  return half_space_integral(pack(m), boundary, side);
}

double dual_mass(const RidgeMeasure& m) {
  double acc = 0.0;
  for (const auto* list : {&m.atoms, &m.particles}) {
    for (const auto& e : *list) {
      if (e.dir.last() != 0.0) acc += e.w * e.dir.last();
    }
  }
  return acc;
}

double crossing_height(const RidgeAtom& e, std::span<const double> z0) {
  const double c = e.dir.last();
  if (c == 0.0) throw std::invalid_argument("crossing_height: equatorial direction");
  double base = 0.0;
  for (std::size_t k = 0; k < z0.size(); ++k) base += e.dir[k] * z0[k];
  return (e.b - base) / c;
}

}  // namespace ridge
