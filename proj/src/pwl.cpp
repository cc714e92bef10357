#include "ridge/pwl.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ridge {

namespace {

constexpr std::size_t kExhaustiveCount = 12;
constexpr std::size_t kRandomSubsets = 10000;
constexpr std::size_t kResampleBudget = 10000;

Vector sample_in_ball(const Ball& ball, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t n = ball.center.size();
  Vector p(n);
  double len = 0.0;
  while (len < 1e-12) {
    for (double& x : p) x = gauss(rng);
    len = norm(p);
  }
  const double r = ball.radius * std::pow(unif(rng), 1.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) p[k] = ball.center[k] + p[k] * r / len;
  return p;
}

double binomial(std::size_t n, std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

// Advances `idx` to the next k-combination of {0..n-1}; false after the last.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::optional<std::vector<std::size_t>> find_degenerate_random(const std::vector<Vector>& points,
                                                               double eps,
                                                               std::mt19937_64& rng) {
  const std::size_t k = points.front().size() + 1;
  std::vector<std::size_t> pool(points.size());
  for (std::size_t s = 0; s < kRandomSubsets; ++s) {
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    std::vector<std::size_t> subset(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(subset.begin(), subset.end());
    if (!(relative_determinant(points, subset) > eps)) return subset;
  }
  return std::nullopt;
}

std::string format_vector(std::span<const double> v) {
  std::ostringstream os;
  os.precision(6);
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ']';
  return os.str();
}

}  // namespace

double relative_determinant(const std::vector<Vector>& points,
                            const std::vector<std::size_t>& subset) {
  if (points.empty()) throw std::invalid_argument("relative_determinant: no points");
  const std::size_t n = points.front().size();
  if (subset.size() != n + 1) throw std::invalid_argument("relative_determinant: need n+1 points");
  Eigen::MatrixXd rows(n, n);
  double denom = 1.0;
  const Vector& base = points[subset[0]];
  for (std::size_t i = 0; i < n; ++i) {
    const Vector& p = points[subset[i + 1]];
    double len = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = p[k] - base[k];
      len += (p[k] - base[k]) * (p[k] - base[k]);
    }
    if (len == 0.0) return 0.0;
    denom *= std::sqrt(len);
  }
  return std::abs(rows.partialPivLu().determinant()) / denom;
}

std::optional<std::vector<std::size_t>> find_degenerate_subset(const std::vector<Vector>& points,
                                                               double eps) {
  if (points.empty()) return std::nullopt;
  const std::size_t k = points.front().size() + 1;
  if (points.size() < k) return std::nullopt;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  do {
    if (!(relative_determinant(points, idx) > eps)) return idx;
  } while (next_combination(idx, points.size()));
  return std::nullopt;
}

GeneralPositionSet sample_general_position(std::size_t n, std::size_t count, const Ball& ball,
                                           std::uint64_t seed, double eps) {
  if (n == 0) throw std::invalid_argument("sample_general_position: n must be >= 1");
  if (ball.center.size() != n) throw std::invalid_argument("sample_general_position: ball center has wrong dimension");
  if (!(ball.radius > 0.0)) throw std::invalid_argument("sample_general_position: radius must be positive");
  if (count < n + 1) throw std::invalid_argument("sample_general_position: need count >= n+1");

  GeneralPositionSet out{{}, ball, seed};
  std::mt19937_64 rng(seed);
  std::mt19937_64 subset_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t i = 0; i < count; ++i) out.points.push_back(sample_in_ball(ball, rng));

  const bool exhaustive =
      count <= kExhaustiveCount || binomial(count, n + 1) <= static_cast<double>(kRandomSubsets);
  for (std::size_t attempt = 0; attempt <= kResampleBudget; ++attempt) {
    const auto bad = exhaustive ? find_degenerate_subset(out.points, eps)
                                : find_degenerate_random(out.points, eps, subset_rng);
    if (!bad) return out;
    out.points[bad->back()] = sample_in_ball(ball, rng);
  }
  throw std::runtime_error("sample_general_position: resampling budget exhausted (seed " +
                           std::to_string(seed) + ")");
}

double affine_deviation(const ScalarField& f, std::span<const double> x1,
                        std::span<const double> x2, std::size_t probes) {
  if (probes < 3) throw std::invalid_argument("affine check needs at least 3 probes");
  if (x1.size() != x2.size()) throw std::invalid_argument("dimension mismatch in affine check");
  const double f1 = f(x1);
  const double f2 = f(x2);
  Vector x(x1.size());
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < probes; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(probes - 1);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = (1.0 - t) * x1[k] + t * x2[k];
    worst = std::max(worst, std::abs(f(x) - ((1.0 - t) * f1 + t * f2)));
  }
  return worst;
}

bool is_affine_on_segment(const ScalarField& f, std::span<const double> x1,
                          std::span<const double> x2, std::size_t probes, double tol) {
  const double dev = affine_deviation(f, x1, x2, probes);
  return dev <= tol * (1.0 + std::abs(f(x1)) + std::abs(f(x2)));
}

LineTrace sample_line(const ScalarField& f, std::span<const double> z0, LineRange range,
                      std::size_t resolution) {
  if (resolution < 3) throw std::invalid_argument("line sampling needs resolution >= 3");
  if (!(range.lo < range.hi)) throw std::invalid_argument("line range must satisfy lo < hi");
  LineTrace t;
  t.z0.assign(z0.begin(), z0.end());
  t.step = (range.hi - range.lo) / static_cast<double>(resolution - 1);
  t.y.resize(resolution);
  t.f.resize(resolution);
  Vector x(t.z0);
  x.push_back(0.0);
  for (std::size_t j = 0; j < resolution; ++j) {
    t.y[j] = j + 1 == resolution ? range.hi : range.lo + static_cast<double>(j) * t.step;
    x.back() = t.y[j];
    t.f[j] = f(x);
  }
  return t;
}

CreaseReport detect_creases(const LineTrace& trace, LineRange range, double crease_tol) {
  const std::size_t n = trace.f.size();
  if (n < 3) throw std::invalid_argument("crease detection needs resolution >= 3");
  CreaseReport rep;
  rep.z0 = trace.z0;
  rep.range = range;
  rep.resolution = n;
  rep.step = trace.step;
  const double h = trace.step;

  double slope_scale = 1.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    slope_scale = std::max(slope_scale, std::abs(trace.f[j + 1] - trace.f[j]) / h);
  }
  rep.threshold = crease_tol * slope_scale;

  std::vector<double> s(n, 0.0);
  for (std::size_t j = 1; j + 1 < n; ++j) s[j] = trace.f[j - 1] - 2.0 * trace.f[j] + trace.f[j + 1];

  // A kink at y_j + t h, 0 <= t < 1, shows up in s_j and s_j+1 only, as
  // jump * h * (1 - t) and jump * h * t, so the pair's sum is jump * h and its
  // centroid is the kink. Cells are visited by decreasing |s|; each
  // unclaimed cell takes its larger same-signed unclaimed neighbour as partner.
  // Windows whose ring carries at least half the peak on both sides are
  // treated as smooth curvature.
  std::vector<std::size_t> order;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    if (s[j] != 0.0) order.push_back(j);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(s[a]) > std::abs(s[b]); });

  std::vector<bool> claimed(n, false);
  auto open = [&](std::size_t k) { return k >= 1 && k + 1 < n && !claimed[k]; };
  auto ring = [&](std::size_t k) { return k >= 1 && k + 1 < n ? s[k] : 0.0; };
  for (std::size_t j : order) {
    if (claimed[j]) continue;
    std::size_t lo = j, hi = j;
    const double left_nb = open(j - 1) && s[j - 1] * s[j] > 0.0 ? std::abs(s[j - 1]) : 0.0;
    const double right_nb = open(j + 1) && s[j + 1] * s[j] > 0.0 ? std::abs(s[j + 1]) : 0.0;
    if (right_nb > 0.0 && right_nb >= left_nb) {
      hi = j + 1;
    } else if (left_nb > 0.0) {
      lo = j - 1;
    }
    for (std::size_t k = lo; k <= hi; ++k) claimed[k] = true;

    // Background: the smaller of the two ring values when they agree in sign.
    // At the ends of the line only one ring cell exists; it stands in for both.
    double left = ring(lo - 1);
    double right = ring(hi + 1);
    if (lo == 1) left = right;
    if (hi + 2 == n) right = left;
    double background = 0.0;
    if (left * right > 0.0) background = std::abs(left) < std::abs(right) ? left : right;
    // Curvature spread evenly across the ring is not a kink: a kink leaves at
    // least one quiet side.
    double peak = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) peak = std::max(peak, std::abs(s[k]));
    if (background * s[j] > 0.0 && std::abs(background) >= 0.5 * peak) continue;

    double mass = 0.0;
    double moment = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) {
      const double e = s[k] - background;
      mass += e;
      moment += e * trace.y[k];
    }
    const double jump = mass / h;
    if (!(std::abs(jump) > rep.threshold)) continue;
    double y = mass != 0.0 ? moment / mass : trace.y[j];
    y = std::clamp(y, trace.y[lo], trace.y[hi]);
    rep.creases.push_back(Crease{y, jump});
  }
  std::sort(rep.creases.begin(), rep.creases.end(),
            [](const Crease& a, const Crease& b) { return a.y < b.y; });
  return rep;
}

CreaseReport detect_creases_on_line(const ScalarField& f, std::span<const double> z0,
                                    LineRange range, std::size_t resolution, double crease_tol) {
  return detect_creases(sample_line(f, z0, range, resolution), range, crease_tol);
}

std::vector<GapVerdict> verify_slab_vanishing(const RidgeMeasure& m, const AffineTail& tail,
                                              std::span<const double> z0,
                                              const CreaseReport& report, double tol,
                                              double margin_steps) {
  if (z0.size() + 1 != m.dim) throw std::invalid_argument("dimension mismatch in slab check");
  if (tail.a0.size() != m.dim) throw std::invalid_argument("dimension mismatch in affine tail");
  const PackedRidge packed = pack(m);
  const double delta = margin_steps * report.step;

  std::vector<double> cuts{report.range.lo};
  for (const auto& c : report.creases) cuts.push_back(c.y);
  cuts.push_back(report.range.hi);

  std::vector<GapVerdict> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    GapVerdict g{cuts[i], cuts[i + 1], 0.0, true};
    const double lo = g.q + delta;
    const double hi = g.r - delta;
    if (lo < hi) {
      g.value = slab_integral(packed, DualSlab(Vector(z0.begin(), z0.end()), lo, hi));
      g.pass = std::abs(g.value) <= tol;
    }
    out.push_back(g);
  }
  return out;
}

CramerWoldReport cramer_wold_check(const RidgeMeasure& m, const std::vector<Vector>& directions,
                                   std::size_t offsets_per_direction, double tol,
                                   std::uint64_t seed) {
  CramerWoldReport rep;
  rep.tol = tol;
  const PackedRidge packed = pack(m);
  std::mt19937_64 rng(seed);
  for (const auto& z0 : directions) {
    if (z0.size() + 1 != m.dim) throw std::invalid_argument("dimension mismatch in half-space check");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto* list : {&m.atoms, &m.particles}) {
      for (const auto& e : *list) {
        if (e.dir.last() == 0.0) continue;
        const double y = crossing_height(e, z0);
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
    }
    if (!(lo <= hi)) {
      lo = -1.0;
      hi = 1.0;
    }
    const double pad = 0.1 * (hi - lo) + 1e-9;
    std::uniform_real_distribution<double> offset(lo - pad, hi + pad);

    double worst = 0.0;
    for (std::size_t k = 0; k < offsets_per_direction; ++k) {
      const DualHyperplane boundary{z0, offset(rng)};
      worst = std::max(worst, std::abs(half_space_integral(packed, boundary, HalfSpace::Above)));
      worst = std::max(worst, std::abs(half_space_integral(packed, boundary, HalfSpace::Below)));
    }
    rep.per_direction.push_back(worst);
    rep.max_abs = std::max(rep.max_abs, worst);
  }
  rep.within_tol = rep.max_abs <= tol;
  return rep;
}

double particle_cloud_tolerance(const RidgeMeasure& m, double factor) {
  const std::size_t count = m.size();
  if (count == 0) return 0.0;
  return factor * total_variation(m) / std::sqrt(static_cast<double>(count));
}

Certificate pwl_certificate(const RidgeMeasure& m, const AffineTail& tail,
                            const GeneralPositionSet& gp, const CertificateConfig& config) {
  m.validate();
  Certificate cert;
  const RidgeEvaluator eval(m, tail);
  const ScalarField f = eval.field();
  const double slab_tol = config.slab_tol * std::max(1.0, total_variation(m));

  std::vector<Vector> lines = gp.points;
  if (lines.empty() && m.dim == 1) lines.push_back(Vector{});

  auto note = [&](const std::string& what) {
    if (cert.counterexample.empty()) cert.counterexample = what;
  };

  for (const auto& z0 : lines) {
    if (z0.size() + 1 != m.dim) throw std::invalid_argument("certificate line has wrong dimension");
    LineCertificate lc;
    const LineTrace trace = sample_line(f, z0, config.y_range, config.resolution);
    lc.report = detect_creases(trace, config.y_range, config.crease_tol);
    const double step = lc.report.step;

    std::vector<double> crossings;
    for (const auto& a : m.atoms) {
      if (a.dir.last() != 0.0) crossings.push_back(crossing_height(a, z0));
    }
    for (std::size_t i = 0; i < lc.report.creases.size(); ++i) {
      const double y = lc.report.creases[i].y;
      const bool hit = std::any_of(crossings.begin(), crossings.end(), [&](double c) {
        return std::abs(c - y) <= config.align_steps * step;
      });
      if (!hit) {
        lc.unmatched.push_back(i);
        std::ostringstream os;
        os << "line z0=" << format_vector(z0) << ": crease at y=" << y
           << " (jump " << lc.report.creases[i].jump << ") matches no atom hyperplane";
        note(os.str());
      }
    }

    lc.gaps = verify_slab_vanishing(m, tail, z0, lc.report, slab_tol, config.margin_steps);
    for (const auto& g : lc.gaps) {
      cert.residual_slab_mass = std::max(cert.residual_slab_mass, std::abs(g.value));
      if (!g.pass && config.check_slab) {
        std::ostringstream os;
        os << "line z0=" << format_vector(z0) << ": crease-free gap (" << g.q << ", " << g.r
           << ") carries slab mass " << g.value;
        note(os.str());
      }

      const double lo = g.q + config.margin_steps * step;
      const double hi = g.r - config.margin_steps * step;
      if (!(lo < hi)) continue;
      Vector x1(z0), x2(z0);
      x1.push_back(lo);
      x2.push_back(hi);
      AffinityVerdict av{g.q, g.r, affine_deviation(f, x1, x2, config.affine_probes), 0.0, true};
      av.limit = config.affine_tol * (1.0 + std::abs(f(x1)) + std::abs(f(x2)));
      av.affine = av.deviation <= av.limit;
      cert.max_affine_deviation = std::max(cert.max_affine_deviation, av.deviation);
      if (!av.affine) {
        ++cert.non_affine_gaps;
        if (config.check_creases) {
          std::ostringstream os;
          os << "line z0=" << format_vector(z0) << ": f is curved on crease-free gap (" << g.q
             << ", " << g.r << "), deviation " << av.deviation << " > " << av.limit;
          note(os.str());
        }
      }
      lc.affinity.push_back(av);
    }

    if (!lc.unmatched.empty()) cert.creases_match_atoms = false;
    for (const auto& g : lc.gaps) cert.slab_ok = cert.slab_ok && g.pass;
    cert.lines.push_back(std::move(lc));
  }
  cert.creases_ok = cert.creases_match_atoms && cert.non_affine_gaps == 0;

  if (config.check_cramer_wold) {
    const RidgeMeasure residual = decompose(m).second;
    CramerWoldReport cw =
        cramer_wold_check(residual, lines, config.cramer_wold_offsets,
                          particle_cloud_tolerance(residual, config.cramer_wold_factor),
                          config.seed);
    cert.cramer_wold_ok = cw.within_tol;
    if (!cw.within_tol) {
      std::ostringstream os;
      os << "particle part has half-space mass " << cw.max_abs << " > " << cw.tol;
      note(os.str());
    }
    cert.cramer_wold = std::move(cw);
  }

  // Only selected checks decide the verdict; the counterexample is rebuilt
  // from those.
  cert.passed = (!config.check_creases || cert.creases_ok) && (!config.check_slab || cert.slab_ok) &&
                (!config.check_cramer_wold || cert.cramer_wold_ok);
  if (cert.passed) {
    cert.counterexample.clear();
    cert.conclusion = "consistent with finite-width representability";
  } else {
    cert.conclusion = "not finite-width representable: " + cert.counterexample;
  }
  return cert;
}

}  // namespace ridge
