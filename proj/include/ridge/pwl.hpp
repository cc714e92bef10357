#pragma once

// Piecewise-linearity diagnostics for functions induced by ridge measures.
//
// Everything here works along vertical lines {z0} x R in R^{n+1}. On such a
// line, the right derivative in e_{n+1} jumps exactly where an entry's
// hyperplane crosses, by w * a_last. Between creases the derivative is
// constant, so the slab integral over any crease-free stretch must vanish.
// A measure whose function is piecewise linear therefore has no mass away
// from its creases; the certificate checks this line by line.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ridge/geometry.hpp"
#include "ridge/measure.hpp"
#include "ridge/network.hpp"

namespace ridge {

struct Ball {
  Vector center;
  double radius = 1.0;
};

/// Points in R^n of which no n+1 lie on a common hyperplane (checked
/// numerically).
struct GeneralPositionSet {
  std::vector<Vector> points;
  Ball ball;
  std::uint64_t seed = 0;
};

inline constexpr double kGeneralPositionTol = 1e-8;

/// |det(z_1 - z_0, ..., z_n - z_0)| / prod_i |z_i - z_0| for the n+1 points
/// selected by `subset`; 0 when two points coincide.
double relative_determinant(const std::vector<Vector>& points,
                            const std::vector<std::size_t>& subset);

/// First (n+1)-subset, in lexicographic order, whose relative determinant is
/// <= eps; std::nullopt when the whole set is in general position.
std::optional<std::vector<std::size_t>> find_degenerate_subset(
    const std::vector<Vector>& points, double eps = kGeneralPositionTol);

/// Uniform samples in the ball, resampled until every checked (n+1)-subset
/// passes the relative determinant test. The check is exhaustive for
/// count <= 12 or when there are at most 10^4 subsets, and uses 10^4 random
/// subsets otherwise. Deterministic in seed.
/// Throws std::runtime_error (mentioning the seed) if the resampling budget
/// runs out.
GeneralPositionSet sample_general_position(std::size_t n, std::size_t count, const Ball& ball,
                                           std::uint64_t seed,
                                           double eps = kGeneralPositionTol);

/// max over probes of |f(x_t) - ((1 - t) f(x1) + t f(x2))|, t uniform in [0, 1].
double affine_deviation(const ScalarField& f, std::span<const double> x1,
                        std::span<const double> x2, std::size_t probes);

/// affine_deviation <= tol * (1 + |f(x1)| + |f(x2)|). Requires probes >= 3.
bool is_affine_on_segment(const ScalarField& f, std::span<const double> x1,
                          std::span<const double> x2, std::size_t probes, double tol);

struct LineRange {
  double lo = -5.0;
  double hi = 5.0;
};

/// Samples of y -> f(z0, y) on a uniform grid including both ends.
struct LineTrace {
  Vector z0;
  double step = 0.0;
  std::vector<double> y;
  std::vector<double> f;
};

LineTrace sample_line(const ScalarField& f, std::span<const double> z0, LineRange range,
                      std::size_t resolution);

struct Crease {
  double y = 0.0;
  /// Right slope minus left slope.
  double jump = 0.0;
};

struct CreaseReport {
  Vector z0;
  LineRange range;
  std::size_t resolution = 0;
  double step = 0.0;
  /// Jumps with magnitude above this were reported.
  double threshold = 0.0;
  std::vector<Crease> creases;  // sorted by y
};

inline constexpr std::size_t kDefaultResolution = 2048;
inline constexpr double kDefaultCreaseTol = 1e-6;

/// Creases from second differences of the sampled trace. Cells are visited
/// by decreasing |second difference| and paired with a same-signed neighbour;
/// the pair's mass (less a background read from the adjacent cells) divided
/// by the step estimates the jump, and its centroid the location. Jumps above
/// crease_tol * max(1, largest |slope| on the line) are reported. A pair
/// whose neighbours on both sides carry at least half its peak is smooth
/// curvature, not a crease.
CreaseReport detect_creases(const LineTrace& trace, LineRange range,
                            double crease_tol = kDefaultCreaseTol);

CreaseReport detect_creases_on_line(const ScalarField& f, std::span<const double> z0,
                                    LineRange range, std::size_t resolution = kDefaultResolution,
                                    double crease_tol = kDefaultCreaseTol);

/// A crease-free stretch (q, r) of a line and the slab integral over
/// (q + margin, r - margin].
struct GapVerdict {
  double q = 0.0;
  double r = 0.0;
  double value = 0.0;
  bool pass = true;
};

/// Gaps are the stretches between consecutive creases and the range ends;
/// the slab is shrunk by `margin_steps` grid steps on each side. Empty
/// shrunk gaps pass with value 0.
std::vector<GapVerdict> verify_slab_vanishing(const RidgeMeasure& m, const AffineTail& tail,
                                              std::span<const double> z0,
                                              const CreaseReport& report, double tol,
                                              double margin_steps = 2.0);

struct CramerWoldReport {
  /// Largest |half-space integral| seen per direction, in input order.
  std::vector<double> per_direction;
  double max_abs = 0.0;
  double tol = 0.0;
  bool within_tol = true;
};

/// For every z0 and `offsets_per_direction` random heights y0, evaluates the
/// dual half-space integrals on both sides of v = y0 + u . z0. Heights are
/// drawn uniformly over the spread of the entries' crossing heights on the
/// line through z0.
CramerWoldReport cramer_wold_check(const RidgeMeasure& m, const std::vector<Vector>& directions,
                                   std::size_t offsets_per_direction, double tol,
                                   std::uint64_t seed = 0);

/// factor * TV / sqrt(entries): the scale at which a finite particle cloud
/// can be told apart from zero.
double particle_cloud_tolerance(const RidgeMeasure& m, double factor = 3.0);

struct CertificateConfig {
  LineRange y_range{};
  std::size_t resolution = kDefaultResolution;
  double crease_tol = kDefaultCreaseTol;
  /// Slab residual tolerance, relative to max(1, TV).
  double slab_tol = 1e-9;
  double affine_tol = 1e-9;
  std::size_t affine_probes = 33;
  /// A crease matches an atom crossing within this many grid steps.
  double align_steps = 2.0;
  double margin_steps = 2.0;
  bool check_creases = true;
  bool check_slab = true;
  bool check_cramer_wold = true;
  std::size_t cramer_wold_offsets = 16;
  double cramer_wold_factor = 3.0;
  std::uint64_t seed = 0;
};

struct AffinityVerdict {
  double q = 0.0;
  double r = 0.0;
  double deviation = 0.0;
  double limit = 0.0;
  bool affine = true;
};

struct LineCertificate {
  CreaseReport report;
  /// Indices into report.creases with no atom crossing nearby.
  std::vector<std::size_t> unmatched;
  std::vector<GapVerdict> gaps;
  std::vector<AffinityVerdict> affinity;
};

struct Certificate {
  std::vector<LineCertificate> lines;
  bool creases_match_atoms = true;
  std::size_t non_affine_gaps = 0;
  double max_affine_deviation = 0.0;
  double residual_slab_mass = 0.0;
  std::optional<CramerWoldReport> cramer_wold;
  bool creases_ok = true;
  bool slab_ok = true;
  bool cramer_wold_ok = true;
  bool passed = true;
  std::string conclusion;
  /// First failing observation, empty when passed.
  std::string counterexample;
};

/// Runs crease detection along {z0} x R for each point of gp, matches creases
/// to atom hyperplanes, checks slab vanishing and affinity on every gap, and
/// (optionally) the half-space check on the particle part.
Certificate pwl_certificate(const RidgeMeasure& m, const AffineTail& tail,
                            const GeneralPositionSet& gp, const CertificateConfig& config = {});

}  // namespace ridge
