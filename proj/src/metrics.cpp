// SPDX-License-Identifier: Apache-2.0
#include "plctdr/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "plctdr/errors.hpp"
#include "plctdr/io.hpp"

namespace plctdr {

namespace {

constexpr double golden_ratio = 0.6180339887498948482045868343656381;

double bisect_zero(const std::function<double(double)>& fn, double lo,
                   double hi, double flo, double tol_abs) {
  for (int it = 0; it < 200 && (hi - lo) > tol_abs; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Golden-section maximization of fn on [a, b].
double golden_max(const std::function<double(double)>& fn, double a,
                  double b) {
  double x1 = b - golden_ratio * (b - a);
  double x2 = a + golden_ratio * (b - a);
  double f1 = fn(x1), f2 = fn(x2);
  for (int it = 0; it < 90 && (b - a) > 1e-14 * std::max(1.0, std::abs(b));
       ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + golden_ratio * (b - a);
      f2 = fn(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - golden_ratio * (b - a);
      f1 = fn(x1);
    }
  }
  return std::max(f1, f2);
}

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& fn, double a,
                            double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = fn(lm), frm = fn(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(fn, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adaptive_simpson_rec(fn, m, b, fm, frm, fb, right, tol / 2,
                              depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& fn, double a,
                        double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = fn(a), fm = fn(m), fb = fn(b);
  const double whole = simpson(a, b, fa, fm, fb);
  return adaptive_simpson_rec(fn, a, b, fa, fm, fb, whole,
                              std::max(tol, 1e-300), 24);
}

// Energy integral of the autocorrelation over [a, b], chunked so each panel
// covers at most about half a lobe of an oscillatory curve. scale_sq sets
// the absolute tolerance (peak energy density of the curve).
double energy_integral(const std::function<double(double)>& fn, double a,
                       double b, double lobe_scale, double scale_sq) {
  auto sq = [&fn](double u) {
    const double v = fn(u);
    return v * v;
  };
  const std::size_t panels = std::min<std::size_t>(
      8192, std::max<std::size_t>(32, static_cast<std::size_t>(
                                          std::ceil(2.0 * (b - a) / lobe_scale))));
  double total = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double pa = a + (b - a) * double(i) / double(panels);
    const double pb = a + (b - a) * double(i + 1) / double(panels);
    total += adaptive_simpson(sq, pa, pb, 1e-8 * scale_sq * (pb - pa));
  }
  return total;
}

}  // namespace

std::string_view convention_name(resolution_convention c) {
  return c == resolution_convention::half ? "half" : "full";
}

resolution_convention convention_from_name(std::string_view name) {
  if (name == "half") return resolution_convention::half;
  if (name == "full") return resolution_convention::full;
  throw spec_error("unknown resolution convention: " + std::string(name));
}

double first_zero_crossing(const std::function<double(double)>& acf,
                           double duration) {
  if (!(duration > 0.0))
    throw spec_error("first_zero_crossing: duration must be > 0");
  const double r0 = acf(0.0);
  if (!(r0 > 0.0))
    throw guard_error("first_zero_crossing: acf(0) must be positive");

  // Progressive scan: geometric growth keeps ~20 evaluations per current
  // lag scale, so a crossing near tau cannot be stepped over.
  double step = duration * 1e-7;
  const double step_cap = duration / 4096.0;
  double prev_t = 0.0, prev_v = r0;
  double t = step;
  const double t_end = duration * (1.0 - 1e-12);
  while (t < t_end) {
    const double v = acf(t);
    if (v == 0.0) return t;
    if ((v < 0.0) != (prev_v < 0.0))
      return bisect_zero(acf, prev_t, t, prev_v, 1e-10 * duration);
    prev_t = t;
    prev_v = v;
    step = std::min(step * 1.05, step_cap);
    t += step;
  }
  throw guard_error("first_zero_crossing: no zero crossing in (0, duration)");
}

double analytic_t_delta(const pulse_spec& spec) {
  validate(spec);
  switch (spec.family) {
    case pulse_family::hs_ofdm:
      return 1.0 / (2.0 * occupied_bandwidth(spec));
    case pulse_family::uwb1:
      return std::sqrt(2.0) * spec.sigma;
    case pulse_family::uwb2:
      return spec.sigma * std::sqrt(6.0 - 2.0 * std::sqrt(6.0));
    case pulse_family::css:
      // Large-BT approximation; css_t_delta is the exact crossing.
      return 1.0 / (2.0 * occupied_bandwidth(spec));
  }
  throw spec_error("analytic_t_delta: unknown family");
}

double css_t_delta(const pulse_spec& spec) {
  validate(spec);
  if (spec.family != pulse_family::css)
    throw spec_error("css_t_delta: spec is not a chirp");
  return first_zero_crossing(acf_evaluator(spec), spec.duration);
}

double rayleigh_resolution(double t_delta, double v_p,
                           resolution_convention convention) {
  if (t_delta < 0.0 || !(v_p > 0.0))
    throw spec_error("rayleigh_resolution: bad inputs");
  return convention == resolution_convention::half ? v_p * t_delta / 2.0
                                                   : v_p * t_delta;
}

double pulse_compression_ratio(double duration, double t_delta) {
  if (!(duration > 0.0) || !(t_delta > 0.0))
    throw spec_error("pulse_compression_ratio: inputs must be positive");
  return duration / t_delta;
}

double pslr_db(const std::function<double(double)>& acf, double t_delta,
               double duration) {
  if (!(t_delta > 0.0) || t_delta >= duration)
    throw spec_error("pslr_db: t_delta outside (0, duration)");
  const double peak = std::abs(acf(0.0));
  if (!(peak > 0.0)) throw guard_error("pslr_db: zero peak");
  const double hi = duration * (1.0 - 1e-12);

  // At least 2^14 scan points, denser when the sidelobe region holds many
  // lobes of width ~t_delta.
  const std::size_t lobes =
      static_cast<std::size_t>(std::ceil((hi - t_delta) / t_delta));
  const std::size_t n = std::max<std::size_t>(
      1 << 14, std::min<std::size_t>(1 << 22, 32 * lobes));
  auto mag = [&acf](double u) { return std::abs(acf(u)); };

  double best = 0.0;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = t_delta + (hi - t_delta) * (double(i) + 0.5) / double(n);
    const double v = mag(u);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  const double du = (hi - t_delta) / double(n);
  const double u_best = t_delta + du * (double(best_i) + 0.5);
  const double a = std::max(t_delta, u_best - du);
  const double b = std::min(hi, u_best + du);
  best = std::max(best, golden_max(mag, a, b));
  if (best <= 0.0) return no_sidelobes_db;
  return 20.0 * std::log10(best / peak);
}

double pslr_db(const acf_curve& curve, double t_delta) {
  const double peak = curve.peak();
  if (!(peak > 0.0)) throw guard_error("pslr_db: zero peak");
  double best = 0.0;
  for (std::size_t i = 0; i < curve.lags.size(); ++i) {
    if (std::abs(curve.lags[i]) <= t_delta) continue;
    best = std::max(best, std::abs(curve.values[i]));
  }
  if (best <= 0.0) return no_sidelobes_db;
  return 20.0 * std::log10(best / peak);
}

double islr_db(const std::function<double(double)>& acf, double t_delta,
               double duration) {
  if (!(t_delta > 0.0)) throw spec_error("islr_db: t_delta must be > 0");
  // A main lobe reaching the support edge leaves no sidelobe region.
  if (t_delta >= duration) return no_sidelobes_db;
  const double hi = duration * (1.0 - 1e-12);
  const double peak = std::abs(acf(0.0));
  const double main_energy =
      energy_integral(acf, 0.0, t_delta, t_delta, peak * peak);
  const double side_energy =
      energy_integral(acf, t_delta, hi, t_delta, peak * peak);
  if (!(main_energy > 0.0)) throw guard_error("islr_db: empty main lobe");
  if (side_energy <= 0.0) return no_sidelobes_db;
  return 10.0 * std::log10(side_energy / main_energy);
}

double islr_db(const acf_curve& curve, double t_delta) {
  double main_energy = 0.0, side_energy = 0.0;
  for (std::size_t i = 0; i + 1 < curve.lags.size(); ++i) {
    const double du = curve.lags[i + 1] - curve.lags[i];
    const double v2 =
        0.5 * (curve.values[i] * curve.values[i] +
               curve.values[i + 1] * curve.values[i + 1]);
    const double mid = 0.5 * (curve.lags[i] + curve.lags[i + 1]);
    if (std::abs(mid) <= t_delta)
      main_energy += v2 * du;
    else
      side_energy += v2 * du;
  }
  if (!(main_energy > 0.0)) throw guard_error("islr_db: empty main lobe");
  if (side_energy <= 0.0) return no_sidelobes_db;
  return 10.0 * std::log10(side_energy / main_energy);
}

double max_unambiguous_range(double delta_t_p, double duration, double v_p) {
  if (!(v_p > 0.0)) throw spec_error("max_unambiguous_range: v_p must be > 0");
  if (delta_t_p < duration)
    throw spec_error(
        "max_unambiguous_range: repetition interval shorter than the pulse "
        "(negative range)");
  return v_p * (delta_t_p - duration) / 2.0;
}

double repetition_interval(double d_max, double duration, double v_p) {
  if (d_max < 0.0) throw spec_error("repetition_interval: d_max must be >= 0");
  if (!(v_p > 0.0)) throw spec_error("repetition_interval: v_p must be > 0");
  return duration + 2.0 * d_max / v_p;
}

metrics_report compute_metrics(const pulse_spec& spec, double v_p,
                               resolution_convention convention,
                               double d_max_m) {
  validate(spec);
  metrics_report rep;
  rep.family = spec.family;
  rep.duration = spec.duration;
  rep.bandwidth = occupied_bandwidth(spec);
  rep.convention = convention;
  rep.v_p = v_p;
  auto acf = acf_evaluator(spec);
  rep.t_delta = first_zero_crossing(acf, spec.duration);
  rep.delta_m = rayleigh_resolution(rep.t_delta, v_p, convention);
  rep.pcr = pulse_compression_ratio(spec.duration, rep.t_delta);
  rep.pslr_db = pslr_db(acf, rep.t_delta, spec.duration);
  rep.islr_db = islr_db(acf, rep.t_delta, spec.duration);
  rep.d_max_m = d_max_m;
  rep.delta_t_p = repetition_interval(d_max_m, spec.duration, v_p);
  return rep;
}

void write_metrics_csv(const std::string& path,
                       const std::vector<metrics_report>& reports,
                       const std::vector<std::string>& comments) {
  std::vector<std::vector<double>> rows;
  rows.reserve(reports.size());
  for (const auto& r : reports)
    rows.push_back({double(static_cast<int>(r.family)), r.bandwidth,
                    r.duration, r.t_delta, r.delta_m, r.pcr, r.pslr_db,
                    r.islr_db});
  write_csv(path, comments,
            {"family_code", "B_hz", "T_s", "T_delta_s", "delta_m", "pcr",
             "pslr_db", "islr_db"},
            rows);
}

void write_metrics_report(const std::string& path, const metrics_report& rep,
                          const std::vector<std::string>& comments) {
  kv_document doc;
  doc.set("family", std::string(family_name(rep.family)));
  doc.set("T_s", rep.duration);
  doc.set("B_hz", rep.bandwidth);
  doc.set("t_delta_s", rep.t_delta);
  doc.set("convention", std::string(convention_name(rep.convention)));
  doc.set("delta_m", rep.delta_m);
  doc.set("pcr", rep.pcr);
  doc.set("pslr_db", rep.pslr_db);
  doc.set("islr_db", rep.islr_db);
  doc.set("v_p_m_per_s", rep.v_p);
  doc.set("d_max_m", rep.d_max_m);
  doc.set("delta_t_p_s", rep.delta_t_p);
  doc.write(path, comments);
}

}  // namespace plctdr
