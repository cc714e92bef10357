#include "ridge/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace ridge {

namespace {

inline double relu(double t) { return t > 0.0 ? t : 0.0; }

std::string residual_message(double tv, double tol) {
  std::ostringstream os;
  os << "nonzero atomless residual - not finite-width representable under the pwl hypothesis"
     << " (particle total variation " << tv << " > tolerance " << tol << ")";
  return os.str();
}

struct Keyed {
  Vector key;  // direction coordinates followed by offset
  double weight;
  std::size_t first;  // index of the first contributing unit
};

// Greedy merge of (key, weight) pairs agreeing within eps, in lexicographic
// key order. Mirrors merge_atoms.
std::vector<Keyed> merge_keyed(std::vector<Keyed> items, double eps) {
  std::sort(items.begin(), items.end(), [](const Keyed& x, const Keyed& y) {
    return std::lexicographical_compare(x.key.begin(), x.key.end(), y.key.begin(), y.key.end());
  });
  std::vector<Keyed> merged;
  for (auto& it : items) {
    bool joined = false;
    for (std::size_t j = merged.size(); j-- > 0;) {
      if (merged[j].key[0] < it.key[0] - eps) break;
      bool same = true;
      for (std::size_t k = 0; k < it.key.size() && same; ++k) {
        same = std::abs(merged[j].key[k] - it.key[k]) <= eps;
      }
      if (same) {
        merged[j].weight += it.weight;
        joined = true;
        break;
      }
    }
    if (!joined) merged.push_back(std::move(it));
  }
  return merged;
}

std::vector<NetworkUnit> merge_units(const std::vector<NetworkUnit>& units, const Tolerances& tol) {
  std::vector<Keyed> items;
  items.reserve(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    Vector key = units[i].a;
    key.push_back(units[i].b);
    items.push_back(Keyed{std::move(key), units[i].c, i});
  }
  std::vector<NetworkUnit> out;
  for (auto& k : merge_keyed(std::move(items), tol.merge)) {
    if (std::abs(k.weight) < tol.weight) continue;
    NetworkUnit u = units[k.first];
    u.c = k.weight;
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace

ResidualError::ResidualError(double residual_tv, double tolerance)
    : std::runtime_error(residual_message(residual_tv, tolerance)),
      residual_tv_(residual_tv),
      tolerance_(tolerance) {}

double default_residual_tol(const RidgeMeasure& m) {
  return std::max(1e-9 * total_variation(m), 1e-12);
}

FiniteNetwork extract_finite_network(const RidgeMeasure& m, const AffineTail& tail,
                                     std::optional<double> residual_tol, const Tolerances& tol) {
  m.validate();
  if (tail.a0.size() != m.dim) throw std::invalid_argument("dimension mismatch in affine tail");
  const double limit = residual_tol.value_or(default_residual_tol(m));
  const double residual = total_variation(m.particles);
  if (residual > limit) throw ResidualError(residual, limit);

  FiniteNetwork net;
  net.dim = m.dim;
  net.c0 = tail.b0 + tail.c0;
  std::vector<NetworkUnit> units;
  units.reserve(m.atoms.size() + 2);
  for (const auto& a : m.atoms) {
    net.c0 -= a.w * relu(-a.b);
    units.push_back(NetworkUnit{a.w, a.dir.vector(), a.b});
  }

  const double scale = norm(tail.a0);
  if (scale > tol.weight) {
    Vector dir(tail.a0);
    for (double& x : dir) x /= scale;
    Vector neg(dir);
    for (double& x : neg) x = 0.0 - x;
    units.push_back(NetworkUnit{scale, std::move(dir), 0.0});
    units.push_back(NetworkUnit{-scale, std::move(neg), 0.0});
  }
  net.units = merge_units(units, tol);
  return net;
}

CanonicalForm network_to_measure(const FiniteNetwork& net, const Tolerances& tol) {
  net.validate();
  EuclideanMeasure t;
  t.dim = net.dim;
  double c0 = net.c0;
  for (const auto& u : net.units) {
    t.atoms.push_back(EuclideanEntry{u.a, u.b, u.c});
    c0 += u.c * relu(-u.b);
  }
  return canonicalize_full(t, c0, tol);
}

std::vector<Hyperplane> crease_hyperplanes(const FiniteNetwork& net, const Tolerances& tol) {
  net.validate();
  std::vector<Hyperplane> planes;
  std::vector<Keyed> items;
  for (std::size_t i = 0; i < net.units.size(); ++i) {
    Hyperplane h = Hyperplane::through(net.units[i].a, net.units[i].b, tol.zero);
    Vector key = h.normal.vector();
    key.push_back(h.offset);
    items.push_back(Keyed{std::move(key), net.units[i].c, planes.size()});
    planes.push_back(std::move(h));
  }
  std::vector<Hyperplane> out;
  for (const auto& k : merge_keyed(std::move(items), tol.merge)) {
    if (std::abs(k.weight) >= tol.weight) out.push_back(planes[k.first]);
  }
  return out;
}

CompactSupportVerdict compact_support_diagnostic(const FiniteNetwork& net, double radius,
                                                 std::size_t rays, std::uint64_t seed,
                                                 double tol) {
  net.validate();
  if (!(radius > 0.0)) throw std::invalid_argument("far-field radius must be positive");
  CompactSupportVerdict v;
  v.rays = rays;
  double scale = 1.0 + std::abs(net.c0);
  for (const auto& u : net.units) scale += std::abs(u.c) * (radius + std::abs(u.b));
  v.threshold = tol * scale;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector x(net.dim);
  for (std::size_t r = 0; r < rays; ++r) {
    double len = 0.0;
    while (len < 1e-12) {
      for (double& c : x) c = gauss(rng);
      len = norm(x);
    }
    for (double& c : x) c *= radius / len;
    v.max_abs = std::max(v.max_abs, std::abs(eval_network(net, x)));
  }
  v.kind = v.max_abs > v.threshold ? FarField::NonzeroFarField : FarField::IdenticallyZero;
  return v;
}

const char* to_string(FarField f) {
  return f == FarField::IdenticallyZero ? "identically zero (within tol)"
                                        : "nonzero far field - not compactly supported";
}

}  // namespace ridge
