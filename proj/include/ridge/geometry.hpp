#pragma once

// Parameter-space geometry for ridge functions x -> relu(a.x - b).
//
// Directions live on the half-sphere: of every antipodal pair {a, -a} on the
// unit sphere exactly one is canonical. The rule is recursive on the last
// coordinate: a is canonical when a_last > 0, or a_last == 0 and the truncated
// vector is canonical one dimension down, with the single point {1} as the
// base case. Hyperplanes {x : a.x = b} are stored with canonical normals, which
// makes (normal, offset) a unique key for each hyperplane.
//
// Hyperplanes whose normal has a nonzero last coordinate map bijectively onto
// the dual space (u, v) in R^n x R via psi. Points of the domain become dual
// hyperplanes and vertical segments become dual slabs.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace ridge {

using Vector = std::vector<double>;

/// Coordinates with |x| <= kZeroTol count as zero in the half-sphere rule.
inline constexpr double kZeroTol = 1e-12;
/// Atoms closer than this in (direction, offset) are merged.
inline constexpr double kMergeTol = 1e-9;
/// Weights below this magnitude are pruned.
inline constexpr double kWeightTol = 1e-12;
/// Accepted deviation of a "unit" input vector from norm one.
inline constexpr double kUnitTol = 1e-9;

struct Tolerances {
  double zero = kZeroTol;
  double merge = kMergeTol;
  double weight = kWeightTol;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

/// A unit vector on the canonical half-sphere. Only constructible through
/// canonicalize_direction or Direction::from_canonical, both of which enforce
/// the invariant.
class Direction {
 public:
  /// Validates that `coords` is unit norm and canonical; throws otherwise.
  static Direction from_canonical(std::span<const double> coords, double zero_tol = kZeroTol);

  std::span<const double> coords() const { return coords_; }
  const Vector& vector() const { return coords_; }
  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  /// a . e_{n+1}
  double last() const { return coords_.back(); }

  bool operator==(const Direction&) const = default;

 private:
  explicit Direction(Vector coords) : coords_(std::move(coords)) {}
  Vector coords_;

  friend std::pair<Direction, int> canonicalize_direction(std::span<const double>, double);
};

/// Returns (d, s) with d canonical and s * d == a / |a| up to rounding. A
/// coordinate that the rule treats as zero is snapped to exactly 0 and the
/// vector renormalized, so equatorial directions have an exact zero last
/// coordinate. Throws std::invalid_argument("degenerate direction") for the
/// zero vector or non-finite input.
std::pair<Direction, int> canonicalize_direction(std::span<const double> a,
                                                 double zero_tol = kZeroTol);

/// True iff the unit vector `a` is its own canonical representative.
/// Throws std::invalid_argument for non-unit input.
bool in_half_sphere(std::span<const double> a, double zero_tol = kZeroTol);

/// The hyperplane {x : normal . x = offset}.
struct Hyperplane {
  Direction normal;
  double offset = 0.0;

  /// Canonicalizes an arbitrary nonzero normal; the offset is rescaled and
  /// flips sign together with the normal.
  static Hyperplane through(std::span<const double> normal, double offset,
                            double zero_tol = kZeroTol);

  std::size_t dim() const { return normal.dim(); }
  /// True when the normal is not orthogonal to e_{n+1}.
  bool in_h1(double zero_tol = kZeroTol) const;
  /// normal . x - offset
  double signed_distance(std::span<const double> x) const;
};

/// Coordinates (u, v) of a hyperplane in the dual space.
struct DualPoint {
  Vector u;
  double v = 0.0;
};

/// {(u, v) : v = y0 + u . z0}; the dual image of the domain point (z0, y0).
struct DualHyperplane {
  Vector z0;
  double y0 = 0.0;

  /// v - y0 - u . z0
  double residual(const DualPoint& p) const;
  bool contains(const DualPoint& p, double tol) const;
};

/// {(u, v) : v - u . z0 in (y1, y2]}, with y1 = -inf and y2 = +inf allowed.
struct DualSlab {
  Vector z0;
  double y1 = 0.0;
  double y2 = 0.0;

  DualSlab(Vector z0, double y1, double y2);
  bool contains(const DualPoint& p) const;
};

/// psi(h) = (a_1 / a_{n+1}, ..., a_n / a_{n+1}, b / a_{n+1}).
/// Throws std::invalid_argument("hyperplane not in H1") when the normal is
/// equatorial.
DualPoint psi(const Hyperplane& h, double zero_tol = kZeroTol);

/// The unique hyperplane with non-equatorial normal whose psi image is p.
Hyperplane psi_inverse(const DualPoint& p);

/// Dual hyperplane of all H1 hyperplanes passing through (z0, y0).
DualHyperplane dual_of_point(std::span<const double> z0, double y0);

/// 1 / sqrt(1 + |u|^2), which equals psi_inverse(p).normal . e_{n+1}.
double cosine_factor(const DualPoint& p);

}  // namespace ridge
