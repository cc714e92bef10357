// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails. All reference values come from the oracles in
// oracles.hpp, never from the code under test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>

#include "oracles.hpp"
#include "ridge/extraction.hpp"
#include "ridge/measure.hpp"
#include "ridge/network.hpp"
#include "ridge/pwl.hpp"

using ridge::Vector;

namespace {

// Pinned tolerances and budgets.
constexpr double kEvalRelTol = 1e-9;
constexpr double kFdStep = 1e-7;
constexpr double kFdTol = 1e-5;
constexpr double kSlabTol = 1e-12;
constexpr double kUnitWeightTol = 1e-12;
constexpr double kRoundTripTol = 1e-9;
constexpr double kCurvatureFactor = 100.0;
constexpr double kJumpTol = 1e-6;
constexpr double kFoldTol = 1e-9;
constexpr double kFarRadius = 1e3;
constexpr std::size_t kFarRays = 100;
constexpr double kBudget10 = 10.0;
constexpr double kBudget30 = 30.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};


// Criterion 1
Outcome canonicalization_invariance() {
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> dims(2, 4), sizes(0, 50);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t dim = dims(rng);
    const auto m = oracle::random_euclidean(rng, dim, sizes(rng));
    const double c0 = oracle::uniform(rng, 1, -5, 5)[0];
    const auto cf = ridge::canonicalize_full(m, c0);
    const ridge::RidgeEvaluator ev(cf.measure, cf.tail);
    for (int i = 0; i < 1000; ++i) {
      const Vector x = oracle::uniform(rng, dim, -5, 5);
      const double f = oracle::eval(m, c0, x);
      worst = std::max(worst, std::abs(f - ev.value(x)) / std::max(1.0, std::abs(f)));
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "max relative error %.3g (tol %.0e)", worst, kEvalRelTol);
  return {worst <= kEvalRelTol, buf};
}

// Criterion 2
Outcome derivative_vs_fd() {
  std::mt19937_64 rng(1002);
  std::uniform_int_distribution<std::size_t> dims(2, 4), sizes(1, 30);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t dim = dims(rng);
    const auto m = oracle::random_atomic(rng, dim, sizes(rng));
    const ridge::AffineTail tail{oracle::uniform(rng, dim, -1, 1), 0.0, 0.0};
    const ridge::RidgeEvaluator ev(m, tail);
    int done = 0;
    while (done < 100) {
      const Vector x = oracle::uniform(rng, dim, -3, 3);
      if (oracle::crease_distance(m, x) < std::sqrt(kFdStep)) continue;
      ++done;
      const double fd = oracle::forward_quotient(
          [&](const Vector& p) { return oracle::eval(m, tail, p); }, x, kFdStep);
      worst = std::max(worst, std::abs(ev.derivative(x) - fd));
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "max |D - forward quotient| %.3g (tol %.0e)", worst, kFdTol);
  return {worst <= kFdTol, buf};
}

// Criterion 3
Outcome slab_identity() {
  std::mt19937_64 rng(1003);
  std::uniform_int_distribution<std::size_t> dims(2, 4), sizes(1, 40);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t dim = dims(rng);
    const auto m = oracle::random_atomic(rng, dim, sizes(rng));
    const ridge::RidgeEvaluator ev(m, ridge::AffineTail::zero(dim));
    for (int i = 0; i < 100; ++i) {
      const Vector z0 = oracle::uniform(rng, dim - 1, -2, 2);
      Vector y = oracle::uniform(rng, 2, -4, 4);
      if (y[0] > y[1]) std::swap(y[0], y[1]);
      Vector x1(z0), x2(z0);
      x1.push_back(y[0]);
      x2.push_back(y[1]);
      const double lhs = ev.slab(ridge::DualSlab(z0, y[0], y[1]));
      const double rhs = ev.derivative(x2) - ev.derivative(x1);
      // Also against the dual-coordinate oracle.
      const double dual = oracle::slab(m, z0, y[0], y[1]);
      worst = std::max({worst, std::abs(lhs - rhs), std::abs(lhs - dual)});
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "max |slab - (D(y2) - D(y1))| %.3g (tol %.0e)", worst, kSlabTol);
  return {worst <= kSlabTol, buf};
}

// Crease weights keyed by canonical hyperplane, computed independently of the
// library: a unit c relu(a.x - b) creases along {a.x = b} with weight c; the
// representative normal has positive last coordinate.
std::vector<std::pair<Vector, double>> crease_weights(const ridge::FiniteNetwork& net) {
  std::vector<std::pair<Vector, double>> groups;
  for (const auto& u : net.units) {
    Vector key(u.a);
    key.push_back(u.b);
    if (u.a.back() < 0) {
      for (double& x : key) x = -x;
    }
    bool found = false;
    for (auto& [k, w] : groups) {
      bool same = true;
      for (std::size_t i = 0; i < k.size() && same; ++i) same = std::abs(k[i] - key[i]) <= 1e-9;
      if (same) {
        w += u.c;
        found = true;
        break;
      }
    }
    if (!found) groups.emplace_back(std::move(key), u.c);
  }
  std::erase_if(groups, [](const auto& g) { return std::abs(g.second) <= 1e-12; });
  return groups;
}

// Criterion 4
Outcome extraction_round_trip() {
  std::mt19937_64 rng(1004);
  std::uniform_int_distribution<std::size_t> dims(2, 4), sizes(0, 30);
  double worst_w = 0.0, worst_f = 0.0;
  bool matched = true;
  for (int t = 0; t < 100; ++t) {
    const std::size_t dim = dims(rng);
    auto net = oracle::random_network(rng, dim, sizes(rng));
    // Some duplicated units to exercise merging.
    if (net.units.size() > 2) net.units.push_back(net.units[1]);
    const auto cf = ridge::network_to_measure(net);
    const auto out = ridge::extract_finite_network(cf.measure, cf.tail);

    auto want = crease_weights(net);
    auto got = crease_weights(out);
    if (want.size() != got.size()) matched = false;
    for (const auto& [k, w] : want) {
      bool hit = false;
      for (const auto& [k2, w2] : got) {
        bool same = true;
        for (std::size_t i = 0; i < k.size() && same; ++i) same = std::abs(k[i] - k2[i]) <= 1e-9;
        if (same) {
          worst_w = std::max(worst_w, std::abs(w - w2));
          hit = true;
        }
      }
      matched = matched && hit;
    }
    for (int i = 0; i < 1000; ++i) {
      const Vector x = oracle::uniform(rng, dim, -5, 5);
      const double f = oracle::eval(net, x);
      worst_f = std::max(worst_f, std::abs(f - oracle::eval(out, x)) / std::max(1.0, std::abs(f)));
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "units matched: %s, max weight error %.3g (tol %.0e), max value error %.3g (tol %.0e)",
                matched ? "yes" : "no", worst_w, kUnitWeightTol, worst_f, kRoundTripTol);
  return {matched && worst_w <= kUnitWeightTol && worst_f <= kRoundTripTol, buf};
}

// Criterion 5
Outcome dichotomy() {
  std::mt19937_64 rng(1005);
  std::uniform_int_distribution<std::size_t> dims(2, 3), sizes(1, 8);
  int atomic_pass = 0;
  const int atomic_total = 25;
  double worst_residual = 0.0;
  for (int t = 0; t < atomic_total; ++t) {
    const std::size_t dim = dims(rng);
    const std::size_t n = dim - 1;
    const auto m = oracle::random_atomic(rng, dim, sizes(rng));
    const ridge::AffineTail tail{oracle::uniform(rng, dim, -1, 1), 0.5, 0.0};
    const auto gp = ridge::sample_general_position(n, n + 3, {Vector(n, 0.0), 1.0}, 500 + t);
    const auto cert = ridge::pwl_certificate(m, tail, gp);
    worst_residual = std::max(worst_residual, cert.residual_slab_mass);
    if (cert.passed && cert.residual_slab_mass == 0.0) ++atomic_pass;
  }

  // Quarter of the circle, directions between 45 and 135 degrees, equal
  // weights summing to one.
  const std::size_t particles = 10000;
  ridge::RidgeMeasure cloud(2);
  for (std::size_t i = 0; i < particles; ++i) {
    const double th = std::numbers::pi / 4 + (i + 0.5) / particles * (std::numbers::pi / 2);
    cloud.particles.push_back(
        {ridge::Direction::from_canonical(Vector{std::cos(th), std::sin(th)}), 1.0, 1.0 / particles});
  }
  const auto gp = ridge::sample_general_position(1, 4, {Vector{0.0}, 1.0}, 2024);
  const ridge::CertificateConfig cfg;
  const auto cert = ridge::pwl_certificate(cloud, ridge::AffineTail::zero(2), gp, cfg);
  const ridge::RidgeEvaluator ev(cloud, ridge::AffineTail::zero(2));
  double witness = 0.0, witness_limit = 0.0;
  for (const auto& line : cert.lines) {
    for (const auto& a : line.affinity) {
      Vector x1(line.report.z0), x2(line.report.z0);
      x1.push_back(a.q + cfg.margin_steps * line.report.step);
      x2.push_back(a.r - cfg.margin_steps * line.report.step);
      // Re-check the gap with the stand-alone predicate.
      if (ridge::is_affine_on_segment(ev.field(), x1, x2, cfg.affine_probes, cfg.affine_tol)) continue;
      if (a.deviation / a.limit > witness / std::max(witness_limit, 1e-300)) {
        witness = a.deviation;
        witness_limit = a.limit;
      }
    }
  }
  const bool curved = witness > kCurvatureFactor * witness_limit && witness_limit > 0.0;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "(a) %d/%d atomic measures pass, max residual %.3g; (b) cloud of %zu particles: "
                "curvature witness deviation %.3g vs tolerance %.3g, certificate %s",
                atomic_pass, atomic_total, worst_residual, particles, witness, witness_limit,
                cert.passed ? "passed" : "failed");
  return {atomic_pass == atomic_total && curved && !cert.passed, buf};
}

// Criterion 6
Outcome point_mass_crease() {
  std::mt19937_64 rng(1006);
  double worst = 0.0;
  int lines = 0;
  for (std::size_t dim : {2u, 3u, 4u}) {
    const std::size_t n = dim - 1;
    for (int t = 0; t < 5; ++t) {
      const auto m = oracle::random_atomic(rng, dim, 1);
      const auto& a = m.atoms[0];
      const double expected = a.w * a.dir.last();
      const auto gp = ridge::sample_general_position(n, 20, {Vector(n, 0.0), 1.0}, 600 + t);
      const auto f = ridge::RidgeEvaluator(m, ridge::AffineTail::zero(dim)).field();
      for (const auto& z0 : gp.points) {
        const double y = oracle::dual_crossing(a.dir.vector(), a.b, z0);
        const auto rep = ridge::detect_creases_on_line(f, z0, {y - 2.0, y + 2.0});
        ++lines;
        if (rep.creases.size() != 1) {
          worst = INFINITY;
          continue;
        }
        worst = std::max(worst, std::abs(rep.creases[0].jump - expected));
      }
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d lines, max |jump - w (a . e_last)| %.3g (tol %.0e)", lines,
                worst, kJumpTol);
  return {worst <= kJumpTol, buf};
}

// Criterion 7
Outcome fold_correctness() {
  std::mt19937_64 rng(1007);
  std::uniform_int_distribution<std::size_t> dims(2, 4), sizes(1, 30);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t dim = dims(rng);
    ridge::SphereMeasure s;
    s.dim = dim;
    ridge::EuclideanMeasure orig;
    orig.dim = dim;
    const std::size_t k = sizes(rng);
    for (std::size_t i = 0; i < k; ++i) {
      Vector a = oracle::unit(rng, dim);
      if (a.back() > 0) {
        for (double& x : a) x = -x;
      }
      const double b = oracle::uniform(rng, 1, -3, 3)[0];
      const double w = oracle::uniform(rng, 1, -5, 5)[0];
      s.atoms.push_back({a, b, w});
      orig.atoms.push_back({a, b, w});
    }
    const auto cf = ridge::fold_to_half_sphere(s);
    const ridge::RidgeEvaluator ev(cf.measure, cf.tail);
    for (int i = 0; i < 1000; ++i) {
      const Vector x = oracle::uniform(rng, dim, -5, 5);
      const double f = oracle::eval(orig, 0.0, x);
      worst = std::max(worst, std::abs(f - ev.value(x)) / std::max(1.0, std::abs(f)));
    }
  }

  // relu(-x2 + 3) - relu(3) = relu(x2 - 3) - relu(-3) - x2, exactly.
  ridge::SphereMeasure ex;
  ex.dim = 2;
  ex.atoms = {{{0, -1}, -3, 1}};
  const auto cf = ridge::fold_to_half_sphere(ex);
  bool exact = cf.measure.atoms.size() == 1 && cf.measure.atoms[0].dir.vector() == Vector{0, 1} &&
               cf.measure.atoms[0].b == 3 && cf.measure.atoms[0].w == 1 && cf.tail.a0 == Vector{0, -1};
  const ridge::RidgeEvaluator ev(cf.measure, cf.tail);
  for (int i = -40; i <= 40; ++i) {
    for (int j = -40; j <= 40; ++j) {
      const Vector x{i / 4.0, j / 4.0};
      const double lhs = std::max(0.0, -x[1] + 3) - 3;
      const double rhs = std::max(0.0, x[1] - 3) - 0.0 - x[1];
      exact = exact && lhs == rhs && ev.value(x) == lhs;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "max relative error %.3g (tol %.0e); worked example exact: %s", worst,
                kFoldTol, exact ? "yes" : "no");
  return {worst <= kFoldTol && exact, buf};
}

// Criterion 8
Outcome compact_support() {
  std::mt19937_64 rng(1008);
  std::uniform_int_distribution<std::size_t> dims(2, 4), sizes(1, 12);
  int nonzero = 0, flagged = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t dim = dims(rng);
    ridge::RidgeMeasure m = oracle::random_atomic(rng, dim, sizes(rng));
    ridge::AffineTail tail{oracle::uniform(rng, dim, -1, 1), 0, 0};
    if (t % 4 == 0) tail.a0.assign(dim, 0.0);
    if (t % 10 == 0) {
      // Bump-like: each hyperplane paired with a shifted copy of opposite sign.
      const std::size_t k = m.atoms.size();
      for (std::size_t i = 0; i < k; ++i) {
        m.atoms.push_back({m.atoms[i].dir, m.atoms[i].b + 0.5, -m.atoms[i].w});
      }
    }
    const auto net = ridge::extract_finite_network(m, tail);
    if (net.units.empty()) continue;
    ++nonzero;
    const auto v = ridge::compact_support_diagnostic(net, kFarRadius, kFarRays, 700 + t);
    if (v.kind == ridge::FarField::NonzeroFarField) ++flagged;
  }
  const bool zero_ok = ridge::compact_support_diagnostic(ridge::FiniteNetwork{3, 0, {}}, kFarRadius).kind ==
                       ridge::FarField::IdenticallyZero;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/%d nonzero networks show a far field at radius %.0e; zero network %s",
                flagged, nonzero, kFarRadius, zero_ok ? "identically zero" : "misreported");
  return {flagged == nonzero && nonzero > 0 && zero_ok, buf};
}

// Criterion 9
Outcome general_position() {
  int ok = 0, total = 0;
  for (std::size_t n : {2u, 3u}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      ++total;
      const auto gp = ridge::sample_general_position(n, n + 3, {Vector(n, 0.0), 1.0}, seed);
      // Every (n+1)-subset, enumerated by bitmask.
      bool good = gp.points.size() == n + 3;
      const std::size_t c = n + 3;
      for (std::uint32_t mask = 0; mask < (1u << c) && good; ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != n + 1) continue;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < c; ++i) {
          if (mask & (1u << i)) idx.push_back(i);
        }
        good = oracle::relative_det(gp.points, idx) > ridge::kGeneralPositionTol;
      }
      if (good) ++ok;
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d/%d seeded sets pass the exhaustive determinant check", ok, total);
  return {ok == total, buf};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double budget;
  };
  const Criterion criteria[] = {
      {1, "canonicalization invariance", canonicalization_invariance, kBudget10},
      {2, "derivative formula vs finite differences", derivative_vs_fd, kBudget10},
      {3, "slab identity exactness", slab_identity, 0.0},
      {4, "extraction round trip", extraction_round_trip, 0.0},
      {5, "piecewise-linear dichotomy", dichotomy, kBudget30},
      {6, "point-mass crease law", point_mass_crease, 0.0},
      {7, "fold correctness", fold_correctness, 0.0},
      {8, "compact-support impossibility", compact_support, 0.0},
      {9, "general-position sampler", general_position, 0.0},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.pass;
    std::string timing = std::to_string(secs).substr(0, 5) + " s";
    if (c.budget > 0.0) {
      timing += " (budget " + std::to_string(static_cast<int>(c.budget)) + " s)";
      pass = pass && secs < c.budget;
    }
    if (!pass) ++failures;
    std::printf("criterion %d: %s - %s: %s [%s]\n", c.id, pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), timing.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures,
              std::size(criteria));
  return failures == 0 ? 0 : 1;
}
