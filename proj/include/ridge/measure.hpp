#pragma once

// Finite signed measures on (half-sphere) x R and the canonicalization
// pipeline that brings an arbitrary Euclidean-parameter measure into that form.
//
// A measure induces the function
//
//   f(x) = sum_entries w * (relu(a . x - b) - relu(-b)) + a0 . x + b0 + c0.
//
// True atoms and particles are kept in separate lists. Particles are a finite
// quadrature stand-in for an atomless component: they are evaluated exactly
// like atoms but are never merged and never become network units.

#include <cstddef>
#include <utility>
#include <vector>

#include "ridge/geometry.hpp"
#include "ridge/kernels.hpp"

namespace ridge {

struct RidgeAtom {
  Direction dir;
  double b = 0.0;
  double w = 0.0;
};

struct RidgeMeasure {
  std::size_t dim = 0;
  std::vector<RidgeAtom> atoms;
  std::vector<RidgeAtom> particles;

  explicit RidgeMeasure(std::size_t dim = 0) : dim(dim) {}

  std::size_t size() const { return atoms.size() + particles.size(); }
  bool empty() const { return atoms.empty() && particles.empty(); }
  /// Throws std::invalid_argument if an entry has the wrong dimension or a
  /// non-finite value.
  void validate() const;
};

/// Additive affine part a0 . x + b0 plus the representation constant c0.
struct AffineTail {
  Vector a0;
  double b0 = 0.0;
  double c0 = 0.0;

  static AffineTail zero(std::size_t dim) { return AffineTail{Vector(dim, 0.0), 0.0, 0.0}; }
  double value(std::span<const double> x) const;
};

/// Entry with an arbitrary (not necessarily unit) direction vector.
struct EuclideanEntry {
  Vector a;
  double b = 0.0;
  double w = 0.0;
};

/// Measure on R^{n+1} x R, finitely supported.
struct EuclideanMeasure {
  std::size_t dim = 0;
  std::vector<EuclideanEntry> atoms;
  std::vector<EuclideanEntry> particles;
};

/// Measure on the full unit sphere x R; entries carry unit directions that
/// may lie in either hemisphere.
struct SphereMeasure {
  std::size_t dim = 0;
  std::vector<EuclideanEntry> atoms;
  std::vector<EuclideanEntry> particles;
  /// Entries dropped by normalization because |a| <= zero tolerance.
  std::size_t dropped = 0;
};

struct CanonicalForm {
  RidgeMeasure measure;
  AffineTail tail;
  /// Entries dropped during normalization (zero direction).
  std::size_t dropped = 0;
};

/// (a, b, w) -> (a / |a|, b / |a|, w |a|). Entries with |a| <= tol.zero are
/// dropped and counted, since relu(-b) - relu(-b) = 0.
SphereMeasure normalize_from_euclidean(const EuclideanMeasure& t, const Tolerances& tol = {});

/// Replaces every entry (a, b, w) whose direction is not canonical by
/// (-a, -b, w) and accumulates w * a into the tail's a0, using
/// relu(-t) = relu(t) - t. The induced function is unchanged.
CanonicalForm fold_to_half_sphere(const SphereMeasure& m, const Tolerances& tol = {});

/// normalize -> fold -> merge atoms -> prune tiny weights. `tail` is added to
/// the fold's affine correction.
CanonicalForm canonicalize_full(const EuclideanMeasure& t, const AffineTail& tail,
                                const Tolerances& tol = {});
CanonicalForm canonicalize_full(const EuclideanMeasure& t, double c0, const Tolerances& tol = {});

/// Merges atoms whose directions and offsets agree within tol.merge (greedy,
/// lexicographic order) and drops merged weights below tol.weight.
std::vector<RidgeAtom> merge_atoms(std::vector<RidgeAtom> atoms, const Tolerances& tol = {});

/// (atomic part, particle part).
std::pair<RidgeMeasure, RidgeMeasure> decompose(const RidgeMeasure& m);

double total_variation(const RidgeMeasure& m);
double total_variation(const std::vector<RidgeAtom>& entries);

/// Packs atoms followed by particles for the kernels.
PackedRidge pack(const RidgeMeasure& m, bool anchored = true);

/// Integral of 1 / sqrt(1 + |u|^2) against the dual-space image of m over the
/// slab, i.e. the sum of w * a_last over non-equatorial entries whose
/// hyperplane meets the segment {z0} x (y1, y2].
double slab_integral(const RidgeMeasure& m, const DualSlab& s);
double slab_integral(const PackedRidge& p, const DualSlab& s);

/// Same weighting over the open dual half-space v > y0 + u . z0 (Above) or
/// v < y0 + u . z0 (Below). In the domain, Above means the entry's hyperplane
/// crosses the vertical line through z0 strictly above height y0.
double half_space_integral(const RidgeMeasure& m, const DualHyperplane& boundary, HalfSpace side);
double half_space_integral(const PackedRidge& p, const DualHyperplane& boundary, HalfSpace side);

/// Sum of w * a_last over non-equatorial entries. The two open half-spaces
/// plus the boundary add up to this.
double dual_mass(const RidgeMeasure& m);

/// Height at which the entry's hyperplane crosses the vertical line through
/// z0: y with a . (z0, y) = b. Requires a non-equatorial direction.
double crossing_height(const RidgeAtom& e, std::span<const double> z0);

}  // namespace ridge
