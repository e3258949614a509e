// SPDX-License-Identifier: Apache-2.0
#include "plctdr/fftutil.hpp"

#include <fftw3.h>

#include <algorithm>

#include "plctdr/errors.hpp"

namespace plctdr {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace {

void transform(cvec& x, int sign) {
  if (x.empty()) throw spec_error("fft: empty input");
  auto* data = reinterpret_cast<fftw_complex*>(x.data());
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(x.size()), data, data,
                                    sign, FFTW_ESTIMATE);
  if (!plan) throw guard_error("fftw planning failed");
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

}  // namespace

void fft(cvec& x) { transform(x, FFTW_FORWARD); }
void ifft(cvec& x) { transform(x, FFTW_BACKWARD); }

std::vector<double> fft_convolve(std::span<const double> a,
                                 std::span<const double> b) {
  if (a.empty() || b.empty()) throw spec_error("fft_convolve: empty input");
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(out_len);
  cvec fa(n), fb(n);
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  fft(fa);
  fft(fb);
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  ifft(fa);
  std::vector<double> out(out_len);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = fa[i].real() * scale;
  return out;
}

std::vector<double> fft_correlate(std::span<const double> a,
                                  std::span<const double> b) {
  std::vector<double> rb(b.rbegin(), b.rend());
  return fft_convolve(a, rb);
}

}  // namespace plctdr
