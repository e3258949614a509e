// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace plctdr {

// Uniformly sampled real-valued time series.
struct sampled_signal {
  std::vector<double> samples;
  double sample_rate = 0.0;  // Hz
  double start_time = 0.0;   // time of samples[0], seconds

  std::size_t size() const { return samples.size(); }
  double time(std::size_t i) const {
    return start_time + static_cast<double>(i) / sample_rate;
  }
  double duration() const {
    return samples.empty() ? 0.0
                           : static_cast<double>(samples.size()) / sample_rate;
  }

  // Energy in continuous-time units: sum of squares / sample_rate.
  double energy() const;
  // Discrete 2-norm of the sample vector.
  double norm() const;

  double peak_abs() const;
  std::size_t argmax_abs() const;
};

// Throws spec_error if the signal is empty, has a non-positive rate or
// non-finite energy.
void validate(const sampled_signal& s);

// Two-column CSV (t_s, amplitude), '#'-prefixed metadata lines first.
void write_signal_csv(const std::string& path, const sampled_signal& s,
                      const std::vector<std::string>& comments = {});

}  // namespace plctdr
