// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "plctdr/pulses.hpp"
#include "plctdr/signal.hpp"

namespace plctdr {

// Closed-form autocorrelation of the raw (un-normalized) pulse p(t).
// All are defined for |tau| < T and throw std::domain_error outside.

// R(tau) = -(tau^2 - 2 sigma^2) e^{-tau^2/(4 sigma^2)} / (8 sqrt(pi) sigma^5)
double acf_uwb1(double sigma, double tau);

// R(tau) = (tau^4 - 12 sigma^2 tau^2 + 12 sigma^4) e^{-tau^2/(4 sigma^2)}
//          / (32 sqrt(pi) sigma^9)
double acf_uwb2(double sigma, double tau);

// Autocorrelation of cos(pi mu t^2) on (-T/2, T/2); Fresnel-integral based.
// mu == 0 is a degenerate chirp and throws spec_error.
double acf_css(double chirp_rate, double duration, double tau);

// Exact autocorrelation of the windowed BPSK multicarrier pulse. Evaluates a
// trigonometric series whose coefficients are precomputed once (O(N^2)); each
// call is then O(N). The removable l==m and l==m==0 terms of the underlying
// pair sum are folded in through their analytic limits.
class hs_ofdm_acf {
 public:
  hs_ofdm_acf(std::span<const double> symbols, double duration);
  double operator()(double tau) const;  // throws std::domain_error, |tau|>=T
  double duration() const { return duration_; }

 private:
  double duration_;
  std::vector<double> omega_;      // carrier angular frequencies
  std::vector<double> cos_coeff_;  // multiplies (T-|tau|) cos(w |tau|)
  std::vector<double> sin_coeff_;  // multiplies sin(w |tau|)
};

double acf_hs_ofdm(std::span<const double> symbols, double duration,
                   double tau);

// Closed form for any family, dispatching on the spec.
double acf_closed(const pulse_spec& spec, double tau);
// Reusable evaluator (precomputes the multicarrier series when needed).
std::function<double(double)> acf_evaluator(const pulse_spec& spec);

// Sampled autocorrelation curve on a symmetric lag grid spanning -T..T.
struct acf_curve {
  pulse_spec source;
  std::vector<double> lags;    // strictly increasing, symmetric about 0
  std::vector<double> values;
  bool normalized = false;     // true once scaled to unit peak

  double peak() const;
  void normalize();
};

// Brute-force oracle: direct discrete linear autocorrelation of the signal,
// scaled by 1/sample_rate so it converges to the continuous ACF. The lag grid
// spans +/- duration at the signal's sample spacing. Deliberately a plain
// O(n^2) summation, independent of the FFT path used elsewhere.
acf_curve acf_numeric(const sampled_signal& signal);

// Midpoint sampling of the family waveform over [-span/2, span/2] without
// support clipping. The Gaussian-derivative closed forms are those of the
// unclipped waveforms, whose tails at 3.5 sigma still carry ~1e-5 of the
// peak; oracle comparisons sample a 2T window (tails < 1e-10) instead of the
// hard-clipped transmit pulse. For the finite-support families this matches
// transmit sampling.
sampled_signal sample_waveform_for_oracle(const pulse_spec& spec, double rate,
                                          double span = 0.0);

// Closed form evaluated on a uniform n_points grid over (-span, span);
// span defaults to the pulse duration.
acf_curve sample_acf(const pulse_spec& spec, std::size_t n_points,
                     double span = 0.0);

// CSV export (tau_s, value, value_normalized).
void write_acf_csv(const std::string& path, const acf_curve& curve,
                   const std::vector<std::string>& comments = {});

// Key/value comparison report between a closed form and the numeric oracle
// on the oracle's lag grid (max_abs_err, relative to peak, grid size).
struct oracle_report {
  double max_abs_err = 0.0;
  double peak = 0.0;
  std::size_t n_lags = 0;
};
oracle_report compare_with_oracle(const pulse_spec& spec,
                                  const acf_curve& numeric);
void write_oracle_report(const std::string& path, const oracle_report& rep,
                         const pulse_spec& spec);

}  // namespace plctdr
