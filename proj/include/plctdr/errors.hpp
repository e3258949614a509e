// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace plctdr {

// Invalid parameters, malformed specs or malformed input files.
struct spec_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerical guard tripped: undersampling, aliasing, singular evaluation.
struct guard_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace plctdr
