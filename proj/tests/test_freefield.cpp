#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "arbgas/freefield.hpp"

using namespace arbgas;

TEST_CASE("green kernel sums to 1/m^2") {
  for (auto [d, L, N] : std::vector<std::array<int, 3>>{{1, 3, 2}, {2, 3, 1}, {2, 2, 2}, {3, 3, 1}}) {
    Torus t(d, L, N);
    for (double m2 : {1e-2, 0.25, 4.0}) {
      GreenKernel g = green(t, m2);
      CHECK(g.sum() == doctest::Approx(1.0 / m2).epsilon(1e-12));
      CHECK(g.at(int64_t(0)) <= 1.0 / m2);
    }
  }
}

TEST_CASE("green kernel matches dense inverse on a tiny torus") {
  // d=1 side 3: (-Delta + m^2) is circulant [2+m2, -1, -1]
  Torus t(1, 3, 1);
  double m2 = 0.7;
  GreenKernel g = green(t, m2);
  // dense inverse by hand: circulant 3x3 with first row (a, b, b)
  double a = 2.0 + m2, b = -1.0;
  // inverse of circulant(a,b,b): eigenvalues a+2b, a-b (twice)
  double e0 = a + 2 * b, e1 = a - b;
  double inv0 = (1.0 / e0 + 2.0 / e1) / 3.0;
  double inv1 = (1.0 / e0 - 1.0 / e1) / 3.0;
  CHECK(g.at(int64_t(0)) == doctest::Approx(inv0).epsilon(1e-12));
  CHECK(g.at(int64_t(1)) == doctest::Approx(inv1).epsilon(1e-12));
  CHECK(g.at(int64_t(2)) == doctest::Approx(inv1).epsilon(1e-12));
}

TEST_CASE("operator applied to kernel gives the delta") {
  for (auto [d, L, N] : std::vector<std::array<int, 3>>{{2, 3, 1}, {3, 3, 1}, {2, 2, 3}}) {
    Torus t(d, L, N);
    GreenKernel g = green(t, 0.3);
    std::vector<double> r = apply_laplacian_plus_mass(t, g.values, 0.3);
    double max_res = 0.0;
    for (int64_t x = 0; x < t.volume; ++x) {
      double expect = (x == 0) ? 1.0 : 0.0;
      max_res = std::max(max_res, std::abs(r[x] - expect));
    }
    CHECK(max_res <= 1e-10);
  }
}

TEST_CASE("automorphism invariance of the green kernel") {
  Torus t(2, 3, 1);
  GreenKernel g = green(t, 0.5);
  for (int64_t x = 0; x < t.volume; ++x) {
    auto c = t.coords(x);
    // coordinate swap
    CHECK(g.at(t.index({c[0], c[1]})) == doctest::Approx(g.at(t.index({c[1], c[0]}))).epsilon(1e-12));
    // reflection
    CHECK(g.at(t.index({c[0], c[1]})) == doctest::Approx(g.at(t.index({-c[0], c[1]}))).epsilon(1e-12));
  }
}

TEST_CASE("w kernel linearity and symmetry") {
  Torus t(2, 2, 2);
  double m2 = 0.25, tn = 3.1;
  GreenKernel g = green(t, m2);
  std::vector<double> w = w_kernel(g, tn);
  double s = 0.0;
  for (double v : w) s += v;
  CHECK(s == doctest::Approx(1.0 / m2 - tn).epsilon(1e-11));
  for (int64_t x = 0; x < t.volume; ++x) {
    auto c = t.coords(x);
    CHECK(w[t.index({c[0], c[1]})] == doctest::Approx(w[t.index({-c[0], -c[1]})]).epsilon(1e-12));
  }
}

TEST_CASE("zd green reference in d=3") {
  ZdGreenRef r0 = zd_green_reference(3, {0, 0, 0}, 32);
  // with the 4 sum sin^2 symbol, (-Delta)^{-1}(0,0) on Z^3 is the walk
  // expected-time constant 1.51639 divided by 2d = 6, i.e. ~0.252731
  CHECK(r0.value > 0.24);
  CHECK(r0.value < 0.26);
  CHECK(r0.stability <= 1e-3);

  ZdGreenRef r1 = zd_green_reference(3, {1, 0, 0}, 32);
  ZdGreenRef r2 = zd_green_reference(3, {2, 0, 0}, 32);
  CHECK(r1.value > r2.value);  // monotone decay
  CHECK(r2.value > 0.0);
  CHECK(r0.c_d > 0.0);

  CHECK_THROWS_AS(zd_green_reference(2, {0, 0}, 32), std::invalid_argument);
}

TEST_CASE("zd reference at full scale is four-digit stable") {
  ZdGreenRef r = zd_green_reference(3, {0, 0, 0}, 64);
  CHECK(r.stability <= 1e-4);
  CHECK(r.value == doctest::Approx(1.5163860592 / 6.0).epsilon(2e-4));
}
