// SPDX-License-Identifier: Apache-2.0
#include "plctdr/fresnel.hpp"

#include <array>
#include <cmath>
#include <complex>

namespace plctdr {

namespace {

constexpr double pi = 3.141592653589793238462643383279502884;
using cd = std::complex<double>;

// F(x) = int_0^x exp(i pi t^2 / 2) dt = C(x) + i S(x).

// Maclaurin series F(x) = x sum_n (i z)^n / (n! (2n+1)), z = pi x^2 / 2.
// Usable up to x ~ 1.7 before alternating-term cancellation matters.
cd maclaurin(double x) {
  const cd iz(0.0, pi * x * x / 2.0);
  cd term(1.0, 0.0);
  cd acc(0.0, 0.0);
  for (int n = 0; n < 64; ++n) {
    cd inc = term / double(2 * n + 1);
    acc += inc;
    if (std::abs(inc) < 1e-18 * (1.0 + std::abs(acc))) break;
    term *= iz / double(n + 1);
  }
  return acc * x;
}

// One Taylor step: F(x0 + h) from F(x0) using the derivative recurrence of
// phi(t) = exp(i pi t^2 / 2): phi' = i pi t phi.
cd taylor_step(cd f0, double x0, double h) {
  const cd ipi(0.0, pi);
  cd phi_prev(0.0, 0.0);
  cd phi = std::exp(cd(0.0, pi * x0 * x0 / 2.0));
  cd acc = f0;
  double hpow = h;  // h^{n+1} / (n+1)!
  for (int n = 0; n < 48; ++n) {
    cd inc = phi * hpow;
    acc += inc;
    if (std::abs(inc) < 1e-19 * (1.0 + std::abs(acc))) break;
    cd phi_next = ipi * (x0 * phi + double(n) * phi_prev);
    phi_prev = phi;
    phi = phi_next;
    hpow *= h / double(n + 2);
  }
  return acc;
}

constexpr double node_start = 1.6;
constexpr double node_step = 0.1;
constexpr int node_count = 33;  // covers 1.6 .. 4.8

const std::array<cd, node_count>& node_table() {
  static const std::array<cd, node_count> table = [] {
    std::array<cd, node_count> t{};
    t[0] = maclaurin(node_start);
    for (int j = 1; j < node_count; ++j)
      t[j] = taylor_step(t[j - 1], node_start + node_step * (j - 1), node_step);
    return t;
  }();
  return table;
}

// Asymptotic auxiliary expansion, optimal truncation; sub-1e-14 for x >= 4.8.
cd asymptotic(double x) {
  const double u = 1.0 / (pi * x * x);
  double f = 0.0, g = 0.0;
  double tf = 1.0;       // (-1)^m (4m-1)!! u^{2m}
  double tg = u;         // (-1)^m (4m+1)!! u^{2m+1}
  double prev_f = 1e300, prev_g = 1e300;
  for (int m = 0; m < 24; ++m) {
    if (std::abs(tf) >= prev_f || std::abs(tg) >= prev_g) break;
    f += tf;
    g += tg;
    prev_f = std::abs(tf);
    prev_g = std::abs(tg);
    tf *= -double(4 * m + 1) * double(4 * m + 3) * u * u;
    tg *= -double(4 * m + 3) * double(4 * m + 5) * u * u;
    if (prev_f < 1e-20 && prev_g < 1e-20) break;
  }
  f /= pi * x;
  g /= pi * x;
  const double z = pi * x * x / 2.0;
  const double sz = std::sin(z), cz = std::cos(z);
  return cd(0.5 + f * sz - g * cz, 0.5 - f * cz - g * sz);
}

cd eval(double x) {
  const double ax = std::abs(x);
  cd v;
  if (ax <= node_start) {
    v = maclaurin(ax);
  } else if (ax < node_start + node_step * (node_count - 1)) {
    int j = int(std::lround((ax - node_start) / node_step));
    if (j < 0) j = 0;
    if (j > node_count - 1) j = node_count - 1;
    const double xj = node_start + node_step * j;
    v = taylor_step(node_table()[j], xj, ax - xj);
  } else {
    v = asymptotic(ax);
  }
  return x < 0.0 ? -v : v;
}

}  // namespace

fresnel_result fresnel_normalized(double x) {
  cd v = eval(x);
  return {v.real(), v.imag()};
}

fresnel_result fresnel(double x) {
  return fresnel_normalized(x * std::sqrt(2.0 / pi));
}

}  // namespace plctdr
