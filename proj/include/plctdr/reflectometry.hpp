// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plctdr/signal.hpp"

namespace plctdr {

struct noise_spec {
  enum class mode { none, snr_db, power };
  mode m = mode::none;
  // snr_db: SNR relative to the mean power of the noiseless echo trace.
  // power: per-sample noise variance.
  double value = 0.0;
  std::uint64_t seed = 0;
};

noise_spec no_noise();
noise_spec noise_snr_db(double snr_db, std::uint64_t seed);
noise_spec noise_power(double variance, std::uint64_t seed);

// y = x * h + v: discrete linear convolution (scaled by 1/rate so that an
// impulse-response channel maps amplitudes exactly) plus seeded white
// Gaussian noise. Sample rates must match.
sampled_signal simulate_echo(const sampled_signal& x, const sampled_signal& h,
                             const noise_spec& noise);

struct reflectogram_meta {
  double v_p = 0.0;  // m/s, maps time to distance d = v_p t / 2
  std::string pulse;
  std::uint64_t topology_hash = 0;
  std::uint64_t noise_seed = 0;
  double noise_level = 0.0;
  bool compressed = false;
};

// Compressed echo trace. The distance axis is derived from the time axis as
// d = v_p t / 2 exactly.
struct reflectogram {
  std::vector<double> values;
  double sample_rate = 0.0;
  double start_time = 0.0;
  reflectogram_meta meta;

  std::size_t size() const { return values.size(); }
  double time(std::size_t i) const {
    return start_time + static_cast<double>(i) / sample_rate;
  }
  double distance(std::size_t i) const { return meta.v_p * time(i) / 2.0; }
};

// Pulse compression: correlate y with the unit-norm matched filter built
// from p (discrete 2-norm normalization, so white-noise variance is
// preserved). The output time axis is aligned so a single echo at delay t0
// peaks at t0.
reflectogram compress(const sampled_signal& y, const sampled_signal& p,
                      const reflectogram_meta& meta);

// Pointwise difference rho_fault - rho_normal; axes and pulse metadata must
// match.
reflectogram differential_reflectogram(const reflectogram& rho_fault,
                                       const reflectogram& rho_normal);

struct trace_peak {
  double distance_m = 0.0;
  double time_s = 0.0;
  double amplitude = 0.0;  // |value| at the refined peak
};

struct fault_report {
  bool detected = false;
  double d_fault_m = 0.0;
  double amplitude = 0.0;
  double threshold = 0.0;
  std::vector<trace_peak> peaks;  // all above-threshold peaks, nearest first
};

// First local maximum of |trace| (t > 0) above the amplitude threshold xi,
// refined by three-point parabolic interpolation. No detection is a valid
// report.
fault_report locate_fault(const reflectogram& delta, double xi);

// CSV (t_s, d_m, value).
void write_reflectogram_csv(const std::string& path, const reflectogram& rho,
                            const std::vector<std::string>& comments = {});
void write_fault_report(const std::string& path, const fault_report& rep,
                        const std::vector<std::string>& comments = {});

}  // namespace plctdr
