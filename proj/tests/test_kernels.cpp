#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <string_view>

#include "oracles.hpp"
#include "ridge/kernels.hpp"

using ridge::Vector;

namespace {

struct Case {
  ridge::PackedRidge packed;
  std::vector<Vector> dirs;
  Vector b, w;
};

// Sequential dot product in the same order the kernels use.
double seq_dot(const Vector& a, const Vector& x) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * x[k];
  return acc;
}

Case random_case(std::mt19937_64& rng, std::size_t dim, std::size_t count, bool dyadic) {
  Case c;
  c.packed = ridge::PackedRidge(dim, count);
  std::uniform_real_distribution<double> u(-2, 2);
  std::uniform_int_distribution<int> q(-16, 16);
  for (std::size_t i = 0; i < count; ++i) {
    // With dyadic data every product and partial sum is exact, so any
    // summation order gives the same bits.
    Vector a = dyadic ? Vector(dim) : oracle::unit(rng, dim);
    if (dyadic) {
      for (double& x : a) x = q(rng) / 8.0;
    }
    if (i % 5 == 4) a.back() = 0.0;  // equatorial entries
    if (a.back() < 0) a.back() = -a.back();
    const double b = dyadic ? q(rng) / 8.0 : u(rng);
    const double w = dyadic ? q(rng) / 8.0 : u(rng);
    c.packed.set(i, a.data(), b, w, i % 3 != 0);
    c.dirs.push_back(a);
    c.b.push_back(b);
    c.w.push_back(w);
  }
  return c;
}

}  // namespace

TEST_CASE("packing pads to the SIMD width with inert entries") {
  ridge::PackedRidge p(3, 5);
  CHECK(p.padded % ridge::kPackWidth == 0);
  CHECK(p.padded >= 5);
  const Vector x{1, 2, 3};
  CHECK(ridge::scalar_kernels().value(p.view(), x.data()) == 0.0);
  CHECK_THROWS_AS(ridge::PackedRidge(0, 1), std::invalid_argument);
}

TEST_CASE("scalar kernels match the direct definitions") {
  std::mt19937_64 rng(17);
  const auto& k = ridge::scalar_kernels();
  for (std::size_t dim = 1; dim <= 5; ++dim) {
    for (std::size_t count : {0u, 1u, 3u, 4u, 7u, 33u}) {
      auto c = random_case(rng, dim, count, false);
      for (int rep = 0; rep < 10; ++rep) {
        const Vector x = oracle::uniform(rng, dim, -3, 3);
        double v = 0, s = 0;
        for (std::size_t i = 0; i < count; ++i) {
          const double t = seq_dot(c.dirs[i], x) - c.b[i];
          const double anchor = (i % 3 != 0 && c.b[i] < 0) ? -c.b[i] : 0.0;
          v += c.w[i] * ((t > 0 ? t : 0.0) - anchor);
          if (t >= 0) s += c.w[i] * c.dirs[i].back();
        }
        CHECK(k.value(c.packed.view(), x.data()) == doctest::Approx(v).epsilon(1e-13));
        CHECK(k.slope(c.packed.view(), x.data()) == doctest::Approx(s).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("AVX2 kernels are equivalent to the scalar reference") {
  const ridge::KernelTable* simd = ridge::avx2_kernels();
  if (!simd) {
    MESSAGE("AVX2 variant unavailable on this machine; equivalence not exercised");
    return;
  }
  const auto& ref = ridge::scalar_kernels();
  std::mt19937_64 rng(23);
  for (bool dyadic : {true, false}) {
    for (std::size_t dim = 1; dim <= 6; ++dim) {
      for (std::size_t count : {0u, 1u, 2u, 3u, 4u, 5u, 8u, 13u, 64u, 257u}) {
        auto c = random_case(rng, dim, count, dyadic);
        const auto v = c.packed.view();
        for (int rep = 0; rep < 20; ++rep) {
          Vector x = oracle::uniform(rng, dim, -3, 3);
          if (dyadic) {
            for (double& t : x) t = std::round(t * 8.0) / 8.0;
          }
          // Put x exactly on an entry hyperplane now and then to exercise the
          // closed/open boundary conventions.
          if (count > 0 && rep % 4 == 0) {
            const std::size_t i = static_cast<std::size_t>(rep) % count;
            c.packed.offset[i] = seq_dot(c.dirs[i], x);
          }
          const Vector z0(x.begin(), x.end() - 1);
          const double y1 = x.back() - 0.75;
          const double y2 = x.back();
          auto same = [&](double a, double b) {
            if (dyadic) {
              CHECK(a == b);
            } else {
              CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b)));
            }
          };
          same(simd->value(v, x.data()), ref.value(v, x.data()));
          same(simd->slope(v, x.data()), ref.slope(v, x.data()));
          same(simd->band(v, z0.data(), y1, y2), ref.band(v, z0.data(), y1, y2));
          same(simd->band(v, z0.data(), -INFINITY, y2), ref.band(v, z0.data(), -INFINITY, y2));
          same(simd->band(v, z0.data(), y1, INFINITY), ref.band(v, z0.data(), y1, INFINITY));
          for (auto side : {ridge::HalfSpace::Above, ridge::HalfSpace::Below}) {
            same(simd->side(v, x.data(), side), ref.side(v, x.data(), side));
          }
        }
      }
    }
  }
}

TEST_CASE("active kernel selection honours RIDGE_KERNELS") {
  const auto& active = ridge::active_kernels();
  const char* env = std::getenv("RIDGE_KERNELS");
  if (env && std::string_view(env) == "scalar") {
    CHECK(active.name == ridge::scalar_kernels().name);
  } else if (ridge::avx2_kernels()) {
    CHECK(active.name == ridge::avx2_kernels()->name);
  } else {
    CHECK(active.name == ridge::scalar_kernels().name);
  }
}
