// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <limits>
#include <string>

#include "plctdr/autocorr.hpp"
#include "plctdr/pulses.hpp"

namespace plctdr {

// delta = v_p T_delta / 2 (half, round-trip physics) or v_p T_delta (full).
enum class resolution_convention { half, full };

std::string_view convention_name(resolution_convention c);
resolution_convention convention_from_name(std::string_view name);

struct metrics_report {
  pulse_family family;
  double duration = 0.0;        // T, s
  double bandwidth = 0.0;       // B, Hz
  double t_delta = 0.0;         // first positive zero crossing, s
  double delta_m = 0.0;         // range resolution, m
  resolution_convention convention = resolution_convention::half;
  double pcr = 0.0;
  double pslr_db = 0.0;
  double islr_db = 0.0;
  double v_p = 0.0;             // m/s
  double delta_t_p = 0.0;       // pulse repetition interval, s
  double d_max_m = 0.0;         // maximum unambiguous range, m
};

// Smallest tau > 0 with acf(tau) == 0, bracketed by a progressive scan and
// polished by bisection to 1e-10 * duration. Requires acf(0) > 0; throws
// guard_error when no sign change exists in (0, duration).
double first_zero_crossing(const std::function<double(double)>& acf,
                           double duration);

// Family closed forms: T/(2N) for the multicarrier pulse, sqrt(2) sigma and
// sigma sqrt(6 - 2 sqrt(6)) for the Gaussian derivatives. The chirp value is
// the 1/(2B) large-BT approximation; the numeric crossing is canonical for
// that family (see css_t_delta).
double analytic_t_delta(const pulse_spec& spec);
// Numeric first zero of the chirp autocorrelation.
double css_t_delta(const pulse_spec& spec);

double rayleigh_resolution(double t_delta, double v_p,
                           resolution_convention convention);

double pulse_compression_ratio(double duration, double t_delta);

// 20 log10( max_{|tau|>T_delta} |R| / R(0) ). Grid scan (>= 2^14 points over
// the sidelobe region, more for large BT) plus golden-section refinement.
double pslr_db(const std::function<double(double)>& acf, double t_delta,
               double duration);
double pslr_db(const acf_curve& curve, double t_delta);

// Sidelobe-to-mainlobe ratio of integrated |R|^2, reported as an amplitude
// ratio in dB: 20 log10 of the 2-norm ratio. Returns -inf when the sidelobe
// integral vanishes (no sidelobes).
double islr_db(const std::function<double(double)>& acf, double t_delta,
               double duration);
double islr_db(const acf_curve& curve, double t_delta);

inline constexpr double no_sidelobes_db =
    -std::numeric_limits<double>::infinity();

// d_max = v_p (delta_T_p - T) / 2; delta_T_p < T throws spec_error.
double max_unambiguous_range(double delta_t_p, double duration, double v_p);
// Inverse: delta_T_p = T + 2 d_max / v_p.
double repetition_interval(double d_max, double duration, double v_p);

// Full metric suite for one pulse/cable pair. d_max defaults drive the
// repetition-interval column. For the chirp family t_delta is the numeric
// crossing; the 1/(2B) approximation is also reported by the CLI.
metrics_report compute_metrics(const pulse_spec& spec, double v_p,
                               resolution_convention convention,
                               double d_max_m);

void write_metrics_report(const std::string& path, const metrics_report& rep,
                          const std::vector<std::string>& comments = {});

// Batch output, one row per report: family, B_hz, T_s, T_delta_s, delta_m,
// pcr, pslr_db, islr_db.
void write_metrics_csv(const std::string& path,
                       const std::vector<metrics_report>& reports,
                       const std::vector<std::string>& comments = {});

}  // namespace plctdr
