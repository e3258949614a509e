// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace plctdr {

using cvec = std::vector<std::complex<double>>;

std::size_t next_pow2(std::size_t n);

// In-place unnormalized transforms (FFTW backend, any length).
// Not safe for concurrent calls: FFTW planning is serialized by the caller.
void fft(cvec& x);
void ifft(cvec& x);  // backward, unnormalized (scale by 1/N for an inverse)

// Linear convolution, output length a.size()+b.size()-1.
std::vector<double> fft_convolve(std::span<const double> a,
                                 std::span<const double> b);

// Linear cross-correlation r[j] = sum_m a[m+j] b[m] for
// j = -(b.size()-1) .. a.size()-1, output length a.size()+b.size()-1.
std::vector<double> fft_correlate(std::span<const double> a,
                                  std::span<const double> b);

}  // namespace plctdr
