// SPDX-License-Identifier: Apache-2.0
#include "plctdr/reflectometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "plctdr/errors.hpp"
#include "plctdr/fftutil.hpp"
#include "plctdr/io.hpp"

namespace plctdr {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559005768;

// Box-Muller on top of mt19937_64; implementation-pinned so seeded outputs
// are stable across standard libraries.
class gaussian_rng {
 public:
  explicit gaussian_rng(std::uint64_t seed) : eng_(seed) {}

  double next() {
    if (have_) {
      have_ = false;
      return cached_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(two_pi * u2);
    have_ = true;
    return r * std::cos(two_pi * u2);
  }

 private:
  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 eng_;
  bool have_ = false;
  double cached_ = 0.0;
};

void check_rates(double a, double b, const char* who) {
  if (std::abs(a - b) > 1e-9 * std::max(a, b))
    throw spec_error(std::string(who) + ": sample rates differ");
}

}  // namespace

noise_spec no_noise() { return {}; }

noise_spec noise_snr_db(double snr_db, std::uint64_t seed) {
  return {noise_spec::mode::snr_db, snr_db, seed};
}

noise_spec noise_power(double variance, std::uint64_t seed) {
  return {noise_spec::mode::power, variance, seed};
}

sampled_signal simulate_echo(const sampled_signal& x, const sampled_signal& h,
                             const noise_spec& noise) {
  validate(x);
  validate(h);
  check_rates(x.sample_rate, h.sample_rate, "simulate_echo");

  sampled_signal y;
  y.sample_rate = x.sample_rate;
  y.start_time = x.start_time + h.start_time;
  y.samples = fft_convolve(x.samples, h.samples);
  const double inv_rate = 1.0 / x.sample_rate;
  for (double& v : y.samples) v *= inv_rate;

  double variance = 0.0;
  switch (noise.m) {
    case noise_spec::mode::none:
      break;
    case noise_spec::mode::power:
      variance = noise.value;
      break;
    case noise_spec::mode::snr_db: {
      double mean_sq = 0.0;
      for (double v : y.samples) mean_sq += v * v;
      mean_sq /= double(y.samples.size());
      variance = mean_sq * std::pow(10.0, -noise.value / 10.0);
      break;
    }
  }
  if (variance > 0.0) {
    gaussian_rng rng(noise.seed);
    const double sd = std::sqrt(variance);
    for (double& v : y.samples) v += sd * rng.next();
  }
  return y;
}

reflectogram compress(const sampled_signal& y, const sampled_signal& p,
                      const reflectogram_meta& meta) {
  validate(y);
  validate(p);
  check_rates(y.sample_rate, p.sample_rate, "compress");
  const double norm = p.norm();
  if (!(norm > 0.0)) throw spec_error("compress: zero-energy filter");

  std::vector<double> filt(p.samples);
  for (double& v : filt) v /= norm;

  reflectogram rho;
  rho.values = fft_correlate(y.samples, filt);
  rho.sample_rate = y.sample_rate;
  // Output index 0 is lag -(K-1); a single echo at delay t0 peaks at t0.
  rho.start_time = y.start_time - p.start_time -
                   double(p.samples.size() - 1) / y.sample_rate;
  rho.meta = meta;
  rho.meta.compressed = true;
  return rho;
}

reflectogram differential_reflectogram(const reflectogram& rho_fault,
                                       const reflectogram& rho_normal) {
  check_rates(rho_fault.sample_rate, rho_normal.sample_rate,
              "differential_reflectogram");
  if (rho_fault.size() != rho_normal.size() ||
      std::abs(rho_fault.start_time - rho_normal.start_time) >
          0.25 / rho_fault.sample_rate)
    throw spec_error("differential_reflectogram: axis mismatch");
  if (rho_fault.meta.pulse != rho_normal.meta.pulse)
    throw spec_error("differential_reflectogram: pulse metadata differs");
  if (rho_fault.meta.v_p != rho_normal.meta.v_p)
    throw spec_error("differential_reflectogram: phase velocity differs");

  reflectogram delta = rho_fault;
  for (std::size_t i = 0; i < delta.values.size(); ++i)
    delta.values[i] -= rho_normal.values[i];
  return delta;
}

fault_report locate_fault(const reflectogram& delta, double xi) {
  if (!(xi > 0.0)) throw spec_error("locate_fault: threshold must be > 0");
  fault_report rep;
  rep.threshold = xi;
  if (delta.size() < 3 || !(delta.meta.v_p > 0.0)) return rep;

  const double dt = 1.0 / delta.sample_rate;
  for (std::size_t i = 1; i + 1 < delta.size(); ++i) {
    if (delta.time(i) <= 0.0) continue;
    const double y1 = std::abs(delta.values[i - 1]);
    const double y2 = std::abs(delta.values[i]);
    const double y3 = std::abs(delta.values[i + 1]);
    if (!(y2 > xi)) continue;
    if (!(y2 >= y1 && y2 > y3)) continue;

    // Three-point parabolic refinement of the peak position and height.
    const double denom = y1 - 2.0 * y2 + y3;
    double shift = 0.0;
    if (denom < 0.0) shift = 0.5 * (y1 - y3) / denom;
    shift = std::clamp(shift, -0.5, 0.5);
    const double t_peak = delta.time(i) + shift * dt;
    const double amp = y2 - 0.25 * (y1 - y3) * shift;

    trace_peak peak;
    peak.time_s = t_peak;
    peak.distance_m = delta.meta.v_p * t_peak / 2.0;
    peak.amplitude = amp;
    rep.peaks.push_back(peak);
  }
  if (!rep.peaks.empty()) {
    rep.detected = true;
    rep.d_fault_m = rep.peaks.front().distance_m;
    rep.amplitude = rep.peaks.front().amplitude;
  }
  return rep;
}

void write_reflectogram_csv(const std::string& path, const reflectogram& rho,
                            const std::vector<std::string>& comments) {
  std::vector<std::vector<double>> rows;
  rows.reserve(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i)
    rows.push_back({rho.time(i), rho.distance(i), rho.values[i]});
  write_csv(path, comments, {"t_s", "d_m", "value"}, rows);
}

void write_fault_report(const std::string& path, const fault_report& rep,
                        const std::vector<std::string>& comments) {
  kv_document doc;
  doc.set("detected", std::string(rep.detected ? "true" : "false"));
  doc.set("threshold", rep.threshold);
  if (rep.detected) {
    doc.set("d_fault_m", rep.d_fault_m);
    doc.set("amplitude", rep.amplitude);
  }
  doc.set("n_peaks", static_cast<std::uint64_t>(rep.peaks.size()));
  const std::size_t limit = std::min<std::size_t>(rep.peaks.size(), 32);
  for (std::size_t i = 0; i < limit; ++i) {
    const std::string prefix = "peak_" + std::to_string(i);
    doc.set(prefix + "_d_m", rep.peaks[i].distance_m);
    doc.set(prefix + "_amplitude", rep.peaks[i].amplitude);
  }
  doc.write(path, comments);
}

}  // namespace plctdr
