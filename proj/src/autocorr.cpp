// SPDX-License-Identifier: Apache-2.0
#include "plctdr/autocorr.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "plctdr/errors.hpp"
#include "plctdr/fresnel.hpp"
#include "plctdr/io.hpp"

namespace plctdr {

namespace {
constexpr double pi = 3.141592653589793238462643383279502884;
constexpr double sqrt_pi = 1.772453850905516027298167483341145183;

void check_lag(double tau, double duration, const char* who) {
  if (std::abs(tau) >= duration) {
    std::ostringstream msg;
    msg << who << ": lag " << format_g12(tau)
        << " outside the open support (-T, T), T = " << format_g12(duration);
    throw std::domain_error(msg.str());
  }
}
}  // namespace

double acf_uwb1(double sigma, double tau) {
  if (!(sigma > 0.0)) throw spec_error("acf_uwb1: sigma must be > 0");
  check_lag(tau, 7.0 * sigma, "acf_uwb1");
  const double s2 = sigma * sigma;
  const double s5 = s2 * s2 * sigma;
  return -(tau * tau - 2.0 * s2) / (8.0 * sqrt_pi * s5) *
         std::exp(-tau * tau / (4.0 * s2));
}

double acf_uwb2(double sigma, double tau) {
  if (!(sigma > 0.0)) throw spec_error("acf_uwb2: sigma must be > 0");
  check_lag(tau, 7.0 * sigma, "acf_uwb2");
  const double s2 = sigma * sigma;
  const double s4 = s2 * s2;
  const double s9 = s4 * s4 * sigma;
  const double t2 = tau * tau;
  return (t2 * t2 - 12.0 * s2 * t2 + 12.0 * s4) / (32.0 * sqrt_pi * s9) *
         std::exp(-t2 / (4.0 * s2));
}

double acf_css(double chirp_rate, double duration, double tau) {
  if (chirp_rate == 0.0) throw spec_error("acf_css: degenerate chirp (mu = 0)");
  if (!(duration > 0.0)) throw spec_error("acf_css: duration must be > 0");
  check_lag(tau, duration, "acf_css");
  // cos(pi mu t^2) is even in mu, so only |mu| matters.
  const double mu = std::abs(chirp_rate);
  const double u = std::abs(tau);
  const double t_rem = duration - u;

  // sin(pi mu u (T-u)) / (2 pi mu u), with the removable u -> 0 limit.
  const double denom_scale = pi * mu * u * duration;
  double term1;
  if (denom_scale < 1e-8) {
    term1 = 0.5 * t_rem;
  } else {
    term1 = std::sin(pi * mu * u * t_rem) / (2.0 * pi * mu * u);
  }

  const double root_mu = std::sqrt(mu);
  const fresnel_result fr = fresnel_normalized(root_mu * t_rem);
  const double half_phase = pi * mu * u * u / 2.0;
  const double term2 =
      (std::cos(half_phase) * fr.c - std::sin(half_phase) * fr.s) /
      (2.0 * root_mu);
  return term1 + term2;
}

hs_ofdm_acf::hs_ofdm_acf(std::span<const double> symbols, double duration)
    : duration_(duration) {
  const std::size_t n = symbols.size();
  if (n < 2) throw spec_error("hs_ofdm_acf: need at least 2 symbols");
  if (!(duration > 0.0)) throw spec_error("hs_ofdm_acf: duration must be > 0");
  for (double s : symbols)
    if (s != 1.0 && s != -1.0)
      throw spec_error("hs_ofdm_acf: symbols must be BPSK (+1/-1)");

  // Real carrier amplitudes of the pulse: the DC line collects the last
  // symbol and twice the first, every other carrier is twice its symbol.
  const std::size_t k_count = n - 1;
  std::vector<double> c(k_count);
  c[0] = symbols[n - 1] + 2.0 * symbols[0];
  for (std::size_t k = 1; k < k_count; ++k) c[k] = 2.0 * symbols[k];

  omega_.resize(k_count);
  cos_coeff_.resize(k_count);
  sin_coeff_.assign(k_count, 0.0);
  const double dw = 2.0 * pi / duration;
  for (std::size_t k = 0; k < k_count; ++k) omega_[k] = dw * double(k);

  cos_coeff_[0] = c[0] * c[0];
  for (std::size_t k = 1; k < k_count; ++k) {
    cos_coeff_[k] = 0.5 * c[k] * c[k];
    sin_coeff_[k] = -c[k] * c[k] / (2.0 * omega_[k]);
  }
  // Cross-carrier pair terms, one sine coefficient per carrier. The k == l
  // terms above are the analytic limits of the pair sum's diagonal; the
  // window phases alternate sign with carrier parity.
  for (std::size_t k = 1; k < k_count; ++k) {
    double acc = 0.0;
    for (std::size_t l = 0; l < k_count; ++l) {
      if (l == k) continue;
      const double sign = ((k + l) & 1) ? -1.0 : 1.0;
      acc += c[l] * sign *
             (-1.0 / (omega_[k] + omega_[l]) - 1.0 / (omega_[k] - omega_[l]));
    }
    sin_coeff_[k] += c[k] * acc;
  }
}

double hs_ofdm_acf::operator()(double tau) const {
  check_lag(tau, duration_, "hs_ofdm_acf");
  const double u = std::abs(tau);
  const double t_rem = duration_ - u;
  double acc = 0.0;
  for (std::size_t k = 0; k < omega_.size(); ++k) {
    const double phase = omega_[k] * u;
    acc += t_rem * cos_coeff_[k] * std::cos(phase) +
           sin_coeff_[k] * std::sin(phase);
  }
  return acc;
}

double acf_hs_ofdm(std::span<const double> symbols, double duration,
                   double tau) {
  return hs_ofdm_acf(symbols, duration)(tau);
}

double acf_closed(const pulse_spec& spec, double tau) {
  validate(spec);
  switch (spec.family) {
    case pulse_family::hs_ofdm:
      return acf_hs_ofdm(spec.symbols, spec.duration, tau);
    case pulse_family::uwb1:
      return acf_uwb1(spec.sigma, tau);
    case pulse_family::uwb2:
      return acf_uwb2(spec.sigma, tau);
    case pulse_family::css:
      return acf_css(spec.chirp_rate, spec.duration, tau);
  }
  throw spec_error("acf_closed: unknown family");
}

std::function<double(double)> acf_evaluator(const pulse_spec& spec) {
  validate(spec);
  switch (spec.family) {
    case pulse_family::hs_ofdm: {
      auto eval =
          std::make_shared<hs_ofdm_acf>(spec.symbols, spec.duration);
      return [eval](double tau) { return (*eval)(tau); };
    }
    case pulse_family::uwb1: {
      const double s = spec.sigma;
      return [s](double tau) { return acf_uwb1(s, tau); };
    }
    case pulse_family::uwb2: {
      const double s = spec.sigma;
      return [s](double tau) { return acf_uwb2(s, tau); };
    }
    case pulse_family::css: {
      const double mu = spec.chirp_rate;
      const double t = spec.duration;
      return [mu, t](double tau) { return acf_css(mu, t, tau); };
    }
  }
  throw spec_error("acf_evaluator: unknown family");
}

double acf_curve::peak() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

void acf_curve::normalize() {
  if (normalized) return;
  const double p = peak();
  if (p <= 0.0) throw guard_error("acf_curve::normalize: zero peak");
  for (double& v : values) v /= p;
  normalized = true;
}

acf_curve acf_numeric(const sampled_signal& signal) {
  validate(signal);
  const std::size_t n = signal.size();
  const double rate = signal.sample_rate;
  acf_curve curve;
  curve.lags.resize(2 * n - 1);
  curve.values.resize(2 * n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t m = 0; m + j < n; ++m)
      acc += signal.samples[m + j] * signal.samples[m];
    acc /= rate;
    // The autocorrelation of a real signal is even; fill both lags.
    curve.values[n - 1 + j] = acc;
    curve.values[n - 1 - j] = acc;
  }
  for (std::size_t i = 0; i < curve.lags.size(); ++i)
    curve.lags[i] =
        (static_cast<double>(i) - static_cast<double>(n - 1)) / rate;
  return curve;
}

sampled_signal sample_waveform_for_oracle(const pulse_spec& spec, double rate,
                                          double span) {
  validate(spec);
  if (!(rate > 0.0))
    throw spec_error("sample_waveform_for_oracle: rate must be > 0");
  if (span <= 0.0) {
    const bool gaussian = spec.family == pulse_family::uwb1 ||
                          spec.family == pulse_family::uwb2;
    span = gaussian ? 2.0 * spec.duration : spec.duration;
  }
  const auto n = static_cast<std::size_t>(
      std::max<long long>(3, std::llround(span * rate)));
  sampled_signal sig;
  sig.sample_rate = rate;
  sig.start_time = -0.5 * double(n - 1) / rate;
  sig.samples.resize(n);
  constexpr double sqrt_two_pi = 2.506628274631000502415765284811045253;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = sig.time(i);
    double v = 0.0;
    switch (spec.family) {
      case pulse_family::uwb1: {
        const double s = spec.sigma;
        v = -t / (sqrt_two_pi * s * s * s) * std::exp(-0.5 * (t / s) * (t / s));
        break;
      }
      case pulse_family::uwb2: {
        const double s = spec.sigma;
        const double s5 = s * s * s * s * s;
        v = (t * t - s * s) / (sqrt_two_pi * s5) *
            std::exp(-0.5 * (t / s) * (t / s));
        break;
      }
      default:
        v = eval_pulse(spec, t);
    }
    sig.samples[i] = v;
  }
  return sig;
}

acf_curve sample_acf(const pulse_spec& spec, std::size_t n_points,
                     double span) {
  validate(spec);
  if (n_points < 3) throw spec_error("sample_acf: need at least 3 points");
  if (span <= 0.0) span = spec.duration;
  if (span > spec.duration) span = spec.duration;
  if ((n_points & 1) == 0) ++n_points;  // include lag 0
  auto eval = acf_evaluator(spec);
  acf_curve curve;
  curve.source = spec;
  curve.lags.resize(n_points);
  curve.values.resize(n_points);
  const std::size_t half = n_points / 2;
  for (std::size_t i = 0; i < n_points; ++i) {
    const double tau =
        span * (static_cast<double>(i) - static_cast<double>(half)) /
        static_cast<double>(half);
    curve.lags[i] = tau;
    curve.values[i] = std::abs(tau) >= spec.duration ? 0.0 : eval(tau);
  }
  return curve;
}

void write_acf_csv(const std::string& path, const acf_curve& curve,
                   const std::vector<std::string>& comments) {
  const double p = curve.peak();
  std::vector<std::vector<double>> rows;
  rows.reserve(curve.lags.size());
  for (std::size_t i = 0; i < curve.lags.size(); ++i)
    rows.push_back({curve.lags[i], curve.values[i],
                    p > 0.0 ? curve.values[i] / p : 0.0});
  write_csv(path, comments, {"tau_s", "value", "value_normalized"}, rows);
}

oracle_report compare_with_oracle(const pulse_spec& spec,
                                  const acf_curve& numeric) {
  auto eval = acf_evaluator(spec);
  oracle_report rep;
  rep.peak = numeric.peak();
  for (std::size_t i = 0; i < numeric.lags.size(); ++i) {
    const double tau = numeric.lags[i];
    if (std::abs(tau) >= spec.duration) continue;
    const double err = std::abs(eval(tau) - numeric.values[i]);
    rep.max_abs_err = std::max(rep.max_abs_err, err);
    ++rep.n_lags;
  }
  return rep;
}

void write_oracle_report(const std::string& path, const oracle_report& rep,
                         const pulse_spec& spec) {
  kv_document doc;
  doc.set("family", std::string(family_name(spec.family)));
  doc.set("T_s", spec.duration);
  doc.set("max_abs_err", rep.max_abs_err);
  doc.set("peak", rep.peak);
  doc.set("max_abs_err_over_peak",
          rep.peak > 0.0 ? rep.max_abs_err / rep.peak : 0.0);
  doc.set("grid", static_cast<std::uint64_t>(rep.n_lags));
  doc.write(path);
}

}  // namespace plctdr
