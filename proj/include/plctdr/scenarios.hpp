// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "plctdr/channel.hpp"
#include "plctdr/metrics.hpp"
#include "plctdr/pulses.hpp"

namespace plctdr {

enum class regulatory_band { cenelec, arib, fcc, eu_bb, br_bb, homeplug_av2 };

struct band_info {
  regulatory_band id;
  std::string name;
  double bandwidth_hz;  // one-sided upper bound
  bool narrowband;
};

const std::vector<band_info>& all_bands();
band_info preset_band(std::string_view name);  // throws spec_error

struct cable_preset {
  std::string name;
  cable_params params;
  double v_p;  // m/s
};

// Lossless presets matching the published phase velocities: lv (1.50e8 m/s,
// Z0 = 50 ohm) and mv (2.56e8 m/s, Z0 = 400 ohm).
cable_preset preset_cable(std::string_view name);  // throws spec_error
const std::vector<cable_preset>& all_cables();

// One reproduced cell versus its stored expectation.
struct table_cell {
  int table = 0;
  std::string family;
  std::string band;
  std::string cable;   // empty when not applicable
  std::string metric;
  double computed = 0.0;
  double expected = 0.0;
  double tol_abs = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
  bool pass = false;
};

struct table_report {
  int table = 0;
  std::vector<table_cell> cells;
  bool all_pass = false;
};

// Recomputes every cell of the published comparison tables from first
// principles (N = 512 subcarriers, duration-matched chirp, d_max presets of
// 1 km / 10 km) and checks them against the expectations file. Table 4 uses
// the given resolution convention; `full` reproduces the published values,
// `half` is the factor-2 audit mode.
table_report reproduce_table(
    int table_id, const std::string& expectations_csv,
    resolution_convention convention = resolution_convention::full);

void write_table_report(const std::string& path, const table_report& rep,
                        const std::vector<std::string>& comments = {});

// Log-spaced bandwidth sweep of duration, resolution and maximum range for
// one family. delta columns for both cable presets; d_max columns for the
// repetition intervals 0.01, 0.1, 1 and 10 ms.
struct sweep_row {
  double bandwidth_hz = 0.0;
  double duration_s = 0.0;
  double t_delta_s = 0.0;
  double delta_lv_m = 0.0;
  double delta_mv_m = 0.0;
  double d_max_m[4] = {0, 0, 0, 0};
};

inline constexpr double sweep_repetition_intervals_s[4] = {0.01e-3, 0.1e-3,
                                                           1e-3, 10e-3};

std::vector<sweep_row> sweep(pulse_family family, double b_min, double b_max,
                             std::size_t n_points,
                             resolution_convention convention);

void write_sweep_csv(const std::string& path, pulse_family family,
                     const std::vector<sweep_row>& rows,
                     const std::vector<std::string>& comments = {});

}  // namespace plctdr
