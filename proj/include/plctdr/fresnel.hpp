// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace plctdr {

struct fresnel_result {
  double c;
  double s;
};

// Normalized Fresnel integrals C(x) = int_0^x cos(pi t^2 / 2) dt and
// S(x) = int_0^x sin(pi t^2 / 2) dt. Odd in x, limit 1/2 as x -> +inf.
// Absolute accuracy better than 1e-12.
fresnel_result fresnel_normalized(double x);

// Convention C(x) = sqrt(2/pi) int_0^x cos(t^2) dt (same for S with sin),
// also odd with limit 1/2; equals fresnel_normalized(x * sqrt(2/pi)).
fresnel_result fresnel(double x);

}  // namespace plctdr
