// SPDX-License-Identifier: Apache-2.0
#include "plctdr/fresnel.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"

using namespace plctdr;

namespace {
constexpr double pi = 3.141592653589793238462643383279502884;

double quad_c_gr2(double x) {
  // sqrt(2/pi) int_0^x cos(t^2) dt by adaptive quadrature, panel-split to
  // track the oscillation.
  const int panels = std::max(4, int(std::ceil(x * x)));
  return std::sqrt(2.0 / pi) * oracles::integrate_panels(
                                   [](double t) { return std::cos(t * t); },
                                   0.0, x, panels, 1e-14);
}

double quad_s_gr2(double x) {
  const int panels = std::max(4, int(std::ceil(x * x)));
  return std::sqrt(2.0 / pi) * oracles::integrate_panels(
                                   [](double t) { return std::sin(t * t); },
                                   0.0, x, panels, 1e-14);
}
}  // namespace

TEST_CASE("fresnel endpoints") {
  const auto z = fresnel(0.0);
  CHECK(z.c == 0.0);
  CHECK(z.s == 0.0);

  // Large-argument limit is 1/2 with a leading oscillation ~ 1/x.
  for (double x : {10.0, 100.0, 1000.0}) {
    const auto v = fresnel(x);
    CHECK(std::abs(v.c - 0.5) < 0.5 / x);
    CHECK(std::abs(v.s - 0.5) < 0.5 / x);
  }
}

TEST_CASE("fresnel is odd") {
  for (double x : {0.3, 1.0, 2.2, 5.5, 17.0}) {
    const auto p = fresnel(x);
    const auto n = fresnel(-x);
    CHECK(p.c == -n.c);
    CHECK(p.s == -n.s);
  }
}

TEST_CASE("fresnel against adaptive quadrature to 1e-10") {
  SUBCASE("x = 1") {
    const auto v = fresnel(1.0);
    CHECK(std::abs(v.c - quad_c_gr2(1.0)) < 1e-10);
    CHECK(std::abs(v.s - quad_s_gr2(1.0)) < 1e-10);
  }
  SUBCASE("random arguments across all evaluation regimes") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
      const double x = 12.0 * uni(rng);
      const auto v = fresnel(x);
      CHECK(std::abs(v.c - quad_c_gr2(x)) < 1e-10);
      CHECK(std::abs(v.s - quad_s_gr2(x)) < 1e-10);
    }
  }
}

TEST_CASE("normalized convention matches its own quadrature") {
  for (double x : {0.5, 1.5, 2.5, 3.7, 4.9, 8.0}) {
    const int panels = std::max(4, int(std::ceil(pi * x * x)));
    const double c_ref = oracles::integrate_panels(
        [](double t) { return std::cos(pi * t * t / 2.0); }, 0.0, x, panels,
        1e-14);
    const double s_ref = oracles::integrate_panels(
        [](double t) { return std::sin(pi * t * t / 2.0); }, 0.0, x, panels,
        1e-14);
    const auto v = fresnel_normalized(x);
    CHECK(std::abs(v.c - c_ref) < 1e-10);
    CHECK(std::abs(v.s - s_ref) < 1e-10);
  }
}
