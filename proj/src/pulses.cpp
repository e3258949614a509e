// SPDX-License-Identifier: Apache-2.0
#include "plctdr/pulses.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "plctdr/errors.hpp"
#include "plctdr/io.hpp"

namespace plctdr {

namespace {
constexpr double pi = 3.141592653589793238462643383279502884;
constexpr double two_pi = 2.0 * pi;
}  // namespace

std::string_view family_name(pulse_family f) {
  switch (f) {
    case pulse_family::hs_ofdm: return "hs-ofdm";
    case pulse_family::uwb1: return "uwb1";
    case pulse_family::uwb2: return "uwb2";
    case pulse_family::css: return "css";
  }
  return "?";
}

pulse_family family_from_name(std::string_view name) {
  if (name == "hs-ofdm" || name == "hs_ofdm" || name == "ofdm")
    return pulse_family::hs_ofdm;
  if (name == "uwb1" || name == "uwb-1") return pulse_family::uwb1;
  if (name == "uwb2" || name == "uwb-2") return pulse_family::uwb2;
  if (name == "css" || name == "chirp") return pulse_family::css;
  throw spec_error("unknown pulse family: " + std::string(name));
}

void validate(const pulse_spec& spec) {
  if (!(spec.duration > 0.0)) throw spec_error("pulse_spec.duration: must be > 0");
  if (!(spec.energy > 0.0)) throw spec_error("pulse_spec.energy: must be > 0");
  switch (spec.family) {
    case pulse_family::hs_ofdm: {
      if (spec.n_subcarriers < 2)
        throw spec_error("pulse_spec.n_subcarriers: must be >= 2");
      if (spec.symbols.size() != static_cast<std::size_t>(spec.n_subcarriers))
        throw spec_error("pulse_spec.symbols: size must equal n_subcarriers");
      for (double s : spec.symbols)
        if (s != 1.0 && s != -1.0)
          throw spec_error("pulse_spec.symbols: BPSK entries must be +1 or -1");
      break;
    }
    case pulse_family::uwb1:
    case pulse_family::uwb2: {
      if (!(spec.sigma > 0.0)) throw spec_error("pulse_spec.sigma: must be > 0");
      if (std::abs(spec.duration - 7.0 * spec.sigma) >
          1e-12 * spec.duration)
        throw spec_error("pulse_spec.duration: must equal 7 sigma");
      break;
    }
    case pulse_family::css: {
      if (spec.chirp_rate == 0.0)
        throw spec_error("pulse_spec.chirp_rate: must be nonzero");
      break;
    }
  }
}

std::vector<double> bpsk_symbols(int n, std::uint64_t seed) {
  if (n < 1) throw spec_error("bpsk_symbols: n must be >= 1");
  std::mt19937_64 eng(seed);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (auto& s : out) s = (eng() >> 63) ? -1.0 : 1.0;
  return out;
}

pulse_spec make_hs_ofdm(int n_subcarriers, double duration,
                        std::uint64_t symbol_seed, double energy) {
  pulse_spec spec;
  spec.family = pulse_family::hs_ofdm;
  spec.duration = duration;
  spec.energy = energy;
  spec.n_subcarriers = n_subcarriers;
  spec.symbols = bpsk_symbols(n_subcarriers, symbol_seed);
  spec.symbol_seed = symbol_seed;
  validate(spec);
  return spec;
}

pulse_spec make_hs_ofdm(int n_subcarriers, double duration,
                        std::vector<double> symbols, double energy) {
  pulse_spec spec;
  spec.family = pulse_family::hs_ofdm;
  spec.duration = duration;
  spec.energy = energy;
  spec.n_subcarriers = n_subcarriers;
  spec.symbols = std::move(symbols);
  validate(spec);
  return spec;
}

pulse_spec make_uwb1(double sigma, double energy) {
  pulse_spec spec;
  spec.family = pulse_family::uwb1;
  spec.sigma = sigma;
  spec.duration = 7.0 * sigma;
  spec.energy = energy;
  validate(spec);
  return spec;
}

pulse_spec make_uwb2(double sigma, double energy) {
  pulse_spec spec;
  spec.family = pulse_family::uwb2;
  spec.sigma = sigma;
  spec.duration = 7.0 * sigma;
  spec.energy = energy;
  validate(spec);
  return spec;
}

pulse_spec make_css(double chirp_rate, double duration, double energy) {
  pulse_spec spec;
  spec.family = pulse_family::css;
  spec.chirp_rate = chirp_rate;
  spec.duration = duration;
  spec.energy = energy;
  validate(spec);
  return spec;
}

pulse_spec make_css_for_bandwidth(double bandwidth, double duration,
                                  double energy) {
  if (!(bandwidth > 0.0)) throw spec_error("make_css_for_bandwidth: bandwidth must be > 0");
  return make_css(2.0 * bandwidth / duration, duration, energy);
}

namespace {

double eval_unchecked(const pulse_spec& spec, double t) {
  if (std::abs(t) >= spec.duration / 2.0) return 0.0;
  switch (spec.family) {
    case pulse_family::hs_ofdm: {
      const int n = spec.n_subcarriers;
      const double df = spec.subcarrier_spacing();
      double acc = spec.symbols[static_cast<std::size_t>(n - 1)];
      for (int k = 0; k <= n - 2; ++k)
        acc += 2.0 * spec.symbols[static_cast<std::size_t>(k)] *
               std::cos(two_pi * k * df * t);
      return acc;
    }
    case pulse_family::uwb1: {
      const double s = spec.sigma;
      return -t / (std::sqrt(two_pi) * s * s * s) *
             std::exp(-0.5 * (t / s) * (t / s));
    }
    case pulse_family::uwb2: {
      const double s = spec.sigma;
      const double s5 = s * s * s * s * s;
      return (t * t - s * s) / (std::sqrt(two_pi) * s5) *
             std::exp(-0.5 * (t / s) * (t / s));
    }
    case pulse_family::css:
      return std::cos(pi * spec.chirp_rate * t * t);
  }
  return 0.0;
}

}  // namespace

double eval_pulse(const pulse_spec& spec, double t) {
  validate(spec);
  return eval_unchecked(spec, t);
}

double occupied_bandwidth(const pulse_spec& spec) {
  validate(spec);
  switch (spec.family) {
    case pulse_family::hs_ofdm:
      return spec.n_subcarriers * spec.subcarrier_spacing();
    case pulse_family::uwb1:
      return uwb1_bandwidth_factor / (pi * spec.sigma);
    case pulse_family::uwb2:
      return uwb2_bandwidth_factor / spec.sigma;
    case pulse_family::css:
      return std::abs(spec.chirp_rate) * spec.duration / 2.0;
  }
  return 0.0;
}

pulse_spec duration_for_bandwidth(pulse_family family, double bandwidth,
                                  int n_subcarriers,
                                  std::uint64_t symbol_seed) {
  if (!(bandwidth > 0.0))
    throw spec_error("duration_for_bandwidth: bandwidth must be > 0");
  switch (family) {
    case pulse_family::hs_ofdm: {
      if (n_subcarriers < 2)
        throw spec_error("duration_for_bandwidth: n_subcarriers must be >= 2");
      return make_hs_ofdm(n_subcarriers, n_subcarriers / bandwidth,
                          symbol_seed);
    }
    case pulse_family::uwb1:
      return make_uwb1(uwb1_bandwidth_factor / (pi * bandwidth));
    case pulse_family::uwb2:
      return make_uwb2(uwb2_bandwidth_factor / bandwidth);
    case pulse_family::css: {
      // Duration-matched to the multicarrier pulse of the same bandwidth.
      const double duration = n_subcarriers / bandwidth;
      return make_css(2.0 * bandwidth / duration, duration);
    }
  }
  throw spec_error("duration_for_bandwidth: unknown family");
}

double default_sample_rate(const pulse_spec& spec, double oversampling) {
  return oversampling * 2.0 * occupied_bandwidth(spec);
}

sampled_signal transmit_signal(const pulse_spec& spec, double sample_rate,
                               double min_oversampling) {
  validate(spec);
  if (!(sample_rate > 0.0))
    throw spec_error("transmit_signal: sample_rate must be > 0");
  if (min_oversampling < 2.0) min_oversampling = 2.0;
  const double required = min_oversampling * 2.0 * occupied_bandwidth(spec);
  if (sample_rate < required) {
    std::ostringstream msg;
    msg << "transmit_signal: sample_rate " << format_g12(sample_rate)
        << " Hz undersamples the pulse; minimum is " << format_g12(required)
        << " Hz (" << format_g12(min_oversampling) << " x 2B)";
    throw guard_error(msg.str());
  }

  const auto n = static_cast<std::size_t>(
      std::max<long long>(1, std::llround(spec.duration * sample_rate)));
  sampled_signal sig;
  sig.sample_rate = sample_rate;
  // Midpoint grid symmetric about t = 0, strictly inside (-T/2, T/2).
  sig.start_time = -0.5 * static_cast<double>(n - 1) / sample_rate;
  sig.samples.resize(n);
  double sumsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = eval_unchecked(spec, sig.time(i));
    sig.samples[i] = v;
    sumsq += v * v;
  }
  if (sumsq <= 0.0) throw guard_error("transmit_signal: zero-energy pulse");
  const double scale = std::sqrt(spec.energy * sample_rate / sumsq);
  for (auto& v : sig.samples) v *= scale;
  return sig;
}

void write_pulse_spec(const std::string& path, const pulse_spec& spec,
                      const std::vector<std::string>& comments) {
  validate(spec);
  kv_document doc;
  doc.set("family", std::string(family_name(spec.family)));
  doc.set("T_s", spec.duration);
  doc.set("E", spec.energy);
  if (spec.family == pulse_family::hs_ofdm) {
    doc.set("N", static_cast<std::int64_t>(spec.n_subcarriers));
    if (spec.symbol_seed) {
      doc.set("seed", *spec.symbol_seed);
    } else {
      std::string bits;
      bits.reserve(spec.symbols.size());
      for (double s : spec.symbols) bits.push_back(s > 0 ? '+' : '-');
      doc.set("symbols", bits);
    }
  }
  if (spec.family == pulse_family::uwb1 || spec.family == pulse_family::uwb2)
    doc.set("sigma_s", spec.sigma);
  if (spec.family == pulse_family::css) doc.set("mu_hz_per_s", spec.chirp_rate);
  doc.write(path, comments);
}

pulse_spec load_pulse_spec(const std::string& path) {
  kv_document doc = kv_document::load(path);
  const pulse_family family = family_from_name(doc.get("family"));
  const double duration = doc.get_double("T_s");
  const double energy = doc.has("E") ? doc.get_double("E") : 1.0;
  switch (family) {
    case pulse_family::hs_ofdm: {
      const int n = static_cast<int>(doc.get_int("N"));
      if (doc.has("seed"))
        return make_hs_ofdm(n, duration,
                            static_cast<std::uint64_t>(doc.get_int("seed")),
                            energy);
      const std::string& bits = doc.get("symbols");
      std::vector<double> symbols;
      symbols.reserve(bits.size());
      for (char c : bits) symbols.push_back(c == '+' ? 1.0 : -1.0);
      return make_hs_ofdm(n, duration, std::move(symbols), energy);
    }
    case pulse_family::uwb1:
      return make_uwb1(doc.get_double("sigma_s"), energy);
    case pulse_family::uwb2:
      return make_uwb2(doc.get_double("sigma_s"), energy);
    case pulse_family::css:
      return make_css(doc.get_double("mu_hz_per_s"), duration, energy);
  }
  throw spec_error("load_pulse_spec: unknown family");
}

}  // namespace plctdr
