// SPDX-License-Identifier: Apache-2.0
#include "plctdr/signal.hpp"

#include <cmath>

#include "plctdr/errors.hpp"
#include "plctdr/io.hpp"

namespace plctdr {

double sampled_signal::energy() const {
  double acc = 0.0;
  for (double v : samples) acc += v * v;
  return acc / sample_rate;
}

double sampled_signal::norm() const {
  double acc = 0.0;
  for (double v : samples) acc += v * v;
  return std::sqrt(acc);
}

double sampled_signal::peak_abs() const {
  double m = 0.0;
  for (double v : samples) m = std::max(m, std::abs(v));
  return m;
}

std::size_t sampled_signal::argmax_abs() const {
  std::size_t best = 0;
  double m = -1.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double a = std::abs(samples[i]);
    if (a > m) {
      m = a;
      best = i;
    }
  }
  return best;
}

void validate(const sampled_signal& s) {
  if (s.samples.empty()) throw spec_error("sampled_signal: empty");
  if (!(s.sample_rate > 0.0))
    throw spec_error("sampled_signal: sample_rate must be positive");
  if (!std::isfinite(s.energy()))
    throw spec_error("sampled_signal: energy is not finite");
}

void write_signal_csv(const std::string& path, const sampled_signal& s,
                      const std::vector<std::string>& comments) {
  std::vector<std::vector<double>> rows;
  rows.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    rows.push_back({s.time(i), s.samples[i]});
  write_csv(path, comments, {"t_s", "amplitude"}, rows);
}

}  // namespace plctdr
