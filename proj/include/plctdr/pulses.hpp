// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plctdr/signal.hpp"

namespace plctdr {

enum class pulse_family { hs_ofdm, uwb1, uwb2, css };

std::string_view family_name(pulse_family f);
pulse_family family_from_name(std::string_view name);  // throws spec_error

// -30 dB occupied-bandwidth constants of the Gaussian derivative pulses,
// B_uwb1 = 1599.49e-3 / (pi sigma) and B_uwb2 = 564.65e-3 / sigma.
inline constexpr double uwb1_bandwidth_factor = 1599.49e-3;
inline constexpr double uwb2_bandwidth_factor = 564.65e-3;

// Seed used when a multicarrier symbol vector has to be drawn and the caller
// did not pin one.
inline constexpr std::uint64_t default_symbol_seed = 20230815u;

// Parametric description of one transmit pulse. All pulses are defined on
// the open interval (-T/2, T/2) and are zero outside it.
struct pulse_spec {
  pulse_family family = pulse_family::css;
  double duration = 0.0;  // T, seconds
  double energy = 1.0;    // E of the transmitted signal

  // hs_ofdm
  int n_subcarriers = 0;            // N
  std::vector<double> symbols;      // BPSK, +/-1, size N
  std::optional<std::uint64_t> symbol_seed;

  // uwb1 / uwb2 (duration == 7 sigma)
  double sigma = 0.0;  // seconds

  // css
  double chirp_rate = 0.0;  // mu, Hz/s; sign selects the sweep direction

  double subcarrier_spacing() const { return 1.0 / duration; }  // hs_ofdm
};

// Throws spec_error naming the offending field.
void validate(const pulse_spec& spec);

std::vector<double> bpsk_symbols(int n, std::uint64_t seed);

pulse_spec make_hs_ofdm(int n_subcarriers, double duration,
                        std::uint64_t symbol_seed = default_symbol_seed,
                        double energy = 1.0);
pulse_spec make_hs_ofdm(int n_subcarriers, double duration,
                        std::vector<double> symbols, double energy = 1.0);
pulse_spec make_uwb1(double sigma, double energy = 1.0);
pulse_spec make_uwb2(double sigma, double energy = 1.0);
pulse_spec make_css(double chirp_rate, double duration, double energy = 1.0);
// B-first chirp constructor, mu = 2 B / T.
pulse_spec make_css_for_bandwidth(double bandwidth, double duration,
                                  double energy = 1.0);

// Closed-form pulse amplitude at time t; exactly 0 for |t| >= T/2.
double eval_pulse(const pulse_spec& spec, double t);

// One-sided occupied bandwidth B; the spectrum spans -B..B.
double occupied_bandwidth(const pulse_spec& spec);

// Inverts occupied_bandwidth for the given family. n_subcarriers is used by
// hs_ofdm and css (the chirp is duration-matched to the multicarrier pulse of
// the same bandwidth: T = N/B, mu = 2B/T).
pulse_spec duration_for_bandwidth(pulse_family family, double bandwidth,
                                  int n_subcarriers = 512,
                                  std::uint64_t symbol_seed = default_symbol_seed);

// Default oversampling of the two-sided band 2B used by transmit_signal.
inline constexpr double default_oversampling = 16.0;
double default_sample_rate(const pulse_spec& spec,
                           double oversampling = default_oversampling);

// Energy-normalized sampled transmit signal x[n] = sqrt(E) p[n] / ||p||,
// sampled on a midpoint grid inside (-T/2, T/2). The rate must be at least
// min_oversampling * 2B; otherwise a guard_error names the required minimum.
sampled_signal transmit_signal(const pulse_spec& spec, double sample_rate,
                               double min_oversampling = 2.0);

// Flat key/value serialization (family, T_s, E, N, seed, sigma_s,
// mu_hz_per_s).
void write_pulse_spec(const std::string& path, const pulse_spec& spec,
                      const std::vector<std::string>& comments = {});
pulse_spec load_pulse_spec(const std::string& path);

}  // namespace plctdr
