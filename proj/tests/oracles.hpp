// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference computations, kept independent of the library paths
// they are used to check.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracles {

// Adaptive Simpson quadrature.
inline double simpson_rec(const std::function<double(double)>& f, double a,
                          double b, double fa, double fm, double fb,
                          double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12, int depth = 40) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Oscillation-aware wrapper: splits [a, b] into panels first.
inline double integrate_panels(const std::function<double(double)>& f,
                               double a, double b, int panels,
                               double tol_per_panel = 1e-12) {
  double acc = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double pa = a + (b - a) * i / panels;
    const double pb = a + (b - a) * (i + 1) / panels;
    acc += integrate(f, pa, pb, tol_per_panel);
  }
  return acc;
}

// Echoes of a single source-mismatched line: amplitude of the k-th arrival
// (k = 0 is the incident-side reflection at t = 0, k >= 1 arrives at
// k * round_trip). gamma_src is the source-side reflection seen from the
// line, gamma_load the far-end one.
inline std::vector<double> bounce_series(double gamma_src, double gamma_load,
                                         int count) {
  std::vector<double> amps;
  amps.push_back(gamma_src);
  double prev = 1.0;
  for (int k = 1; k <= count; ++k) {
    // (1 - gamma_src^2) * gamma_load^k * (-gamma_src)^{k-1}
    prev = (k == 1) ? (1.0 - gamma_src * gamma_src) * gamma_load
                    : prev * (-gamma_src) * gamma_load;
    amps.push_back(prev);
  }
  return amps;
}

}  // namespace oracles
