// SPDX-License-Identifier: Apache-2.0
#include "plctdr/scenarios.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "plctdr/errors.hpp"
#include "plctdr/io.hpp"

namespace plctdr {

const std::vector<band_info>& all_bands() {
  static const std::vector<band_info> bands = {
      {regulatory_band::cenelec, "cenelec", 148.5e3, true},
      {regulatory_band::arib, "arib", 450e3, true},
      {regulatory_band::fcc, "fcc", 490e3, true},
      {regulatory_band::eu_bb, "eu-bb", 30e6, false},
      {regulatory_band::br_bb, "br-bb", 50e6, false},
      {regulatory_band::homeplug_av2, "homeplug-av2", 86e6, false},
  };
  return bands;
}

band_info preset_band(std::string_view name) {
  std::string key(name);
  for (auto& c : key) c = char(std::tolower(static_cast<unsigned char>(c)));
  if (key == "eu" || key == "european") key = "eu-bb";
  if (key == "br" || key == "brazilian") key = "br-bb";
  if (key == "homeplug" || key == "homeplug_av2") key = "homeplug-av2";
  if (key == "eu_bb") key = "eu-bb";
  if (key == "br_bb") key = "br-bb";
  for (const auto& b : all_bands())
    if (b.name == key) return b;
  throw spec_error("unknown regulatory band: " + std::string(name));
}

namespace {

cable_preset make_lossless_preset(std::string name, double z0, double v_p) {
  cable_preset preset;
  preset.name = std::move(name);
  preset.v_p = v_p;
  preset.params.base.r = 0.0;
  preset.params.base.g = 0.0;
  preset.params.base.l = z0 / v_p;
  preset.params.base.c = 1.0 / (z0 * v_p);
  return preset;
}

}  // namespace

const std::vector<cable_preset>& all_cables() {
  // Lossless placeholders; only the phase velocities enter the published
  // numbers. Z0 of 50 / 400 ohm for the underground and overhead cables.
  static const std::vector<cable_preset> cables = {
      make_lossless_preset("lv", 50.0, 1.50e8),
      make_lossless_preset("mv", 400.0, 2.56e8),
  };
  return cables;
}

cable_preset preset_cable(std::string_view name) {
  std::string key(name);
  for (auto& c : key) c = char(std::tolower(static_cast<unsigned char>(c)));
  for (const auto& c : all_cables())
    if (c.name == key) return c;
  throw spec_error("unknown cable preset: " + std::string(name));
}

namespace {

struct expectation_row {
  int table;
  std::string family, band, cable, metric;
  double expected, tol_abs;
};

std::vector<expectation_row> load_expectations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw spec_error("cannot open expectations file: " + path);
  std::vector<expectation_row> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // column-name line
      continue;
    }
    std::istringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 7)
      throw spec_error(path + ":" + std::to_string(lineno) +
                       ": expected 7 columns");
    expectation_row row;
    row.table = std::stoi(fields[0]);
    row.family = fields[1];
    row.band = fields[2];
    row.cable = fields[3];
    row.metric = fields[4];
    row.expected = std::stod(fields[5]);
    row.tol_abs = std::stod(fields[6]);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw spec_error("expectations file is empty: " + path);
  return rows;
}

constexpr int table_subcarriers = 512;

pulse_spec spec_for(const std::string& family_token, double bandwidth) {
  return duration_for_bandwidth(family_from_name(family_token), bandwidth,
                                table_subcarriers, default_symbol_seed);
}

double compute_cell(const expectation_row& row,
                    resolution_convention convention) {
  switch (row.table) {
    case 1: {
      // Compression ratio from the family zero-crossing closed forms; the
      // bandwidth cancels.
      const pulse_spec spec = spec_for(row.family, 1.0);
      return pulse_compression_ratio(spec.duration, analytic_t_delta(spec));
    }
    case 2: {
      const pulse_spec spec = spec_for(row.family, 1.0);
      auto acf = acf_evaluator(spec);
      const double t_delta =
          spec.family == pulse_family::uwb1 || spec.family == pulse_family::uwb2
              ? analytic_t_delta(spec)
              : first_zero_crossing(acf, spec.duration);
      if (row.metric == "pslr_db")
        return pslr_db(acf, t_delta, spec.duration);
      if (row.metric == "islr_db")
        return islr_db(acf, t_delta, spec.duration);
      throw spec_error("table 2: unknown metric " + row.metric);
    }
    case 3: {
      const band_info band = preset_band(row.band);
      return spec_for(row.family, band.bandwidth_hz).duration * 1e6;  // us
    }
    case 4: {
      const band_info band = preset_band(row.band);
      const cable_preset cable = preset_cable(row.cable);
      const pulse_spec spec = spec_for(row.family, band.bandwidth_hz);
      return rayleigh_resolution(analytic_t_delta(spec), cable.v_p,
                                 convention);
    }
    case 5: {
      const band_info band = preset_band(row.band);
      const cable_preset cable = preset_cable(row.cable);
      const pulse_spec spec = spec_for(row.family, band.bandwidth_hz);
      const double d_max = cable.name == "lv" ? 1e3 : 10e3;
      return repetition_interval(d_max, spec.duration, cable.v_p) * 1e6;  // us
    }
    default:
      throw spec_error("unknown table id: " + std::to_string(row.table));
  }
}

}  // namespace

table_report reproduce_table(int table_id, const std::string& expectations_csv,
                             resolution_convention convention) {
  if (table_id < 1 || table_id > 5)
    throw spec_error("table id must be 1..5, got " + std::to_string(table_id));
  const auto expectations = load_expectations(expectations_csv);
  table_report rep;
  rep.table = table_id;
  rep.all_pass = true;
  for (const auto& row : expectations) {
    if (row.table != table_id) continue;
    table_cell cell;
    cell.table = row.table;
    cell.family = row.family;
    cell.band = row.band;
    cell.cable = row.cable;
    cell.metric = row.metric;
    cell.expected = row.expected;
    cell.tol_abs = row.tol_abs;
    cell.computed = compute_cell(row, convention);
    cell.abs_err = std::abs(cell.computed - cell.expected);
    cell.rel_err =
        cell.expected != 0.0 ? cell.abs_err / std::abs(cell.expected) : 0.0;
    cell.pass = cell.abs_err <= cell.tol_abs;
    rep.all_pass = rep.all_pass && cell.pass;
    rep.cells.push_back(std::move(cell));
  }
  if (rep.cells.empty())
    throw spec_error("no expectation rows for table " +
                     std::to_string(table_id));
  return rep;
}

void write_table_report(const std::string& path, const table_report& rep,
                        const std::vector<std::string>& comments) {
  std::ofstream out(path);
  if (!out) throw spec_error("cannot open for writing: " + path);
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "table,family,band,cable,metric,computed,expected,tol_abs,rel_err,"
         "pass\n";
  for (const auto& c : rep.cells) {
    out << c.table << ',' << c.family << ',' << c.band << ',' << c.cable
        << ',' << c.metric << ',' << format_g12(c.computed) << ','
        << format_g12(c.expected) << ',' << format_g12(c.tol_abs) << ','
        << format_g12(c.rel_err) << ',' << (c.pass ? 1 : 0) << "\n";
  }
}

std::vector<sweep_row> sweep(pulse_family family, double b_min, double b_max,
                             std::size_t n_points,
                             resolution_convention convention) {
  if (!(b_min > 0.0) || !(b_max > b_min))
    throw spec_error("sweep: need 0 < b_min < b_max");
  if (n_points < 2) throw spec_error("sweep: need at least 2 points");
  const double lv = preset_cable("lv").v_p;
  const double mv = preset_cable("mv").v_p;
  std::vector<sweep_row> rows;
  rows.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double b =
        b_min * std::pow(b_max / b_min,
                         double(i) / double(n_points - 1));
    const pulse_spec spec = duration_for_bandwidth(family, b,
                                                   table_subcarriers,
                                                   default_symbol_seed);
    sweep_row row;
    row.bandwidth_hz = b;
    row.duration_s = spec.duration;
    row.t_delta_s = analytic_t_delta(spec);
    row.delta_lv_m = rayleigh_resolution(row.t_delta_s, lv, convention);
    row.delta_mv_m = rayleigh_resolution(row.t_delta_s, mv, convention);
    for (int k = 0; k < 4; ++k) {
      const double dtp = sweep_repetition_intervals_s[k];
      row.d_max_m[k] = dtp >= spec.duration
                           ? max_unambiguous_range(dtp, spec.duration, lv)
                           : std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(const std::string& path, pulse_family family,
                     const std::vector<sweep_row>& rows,
                     const std::vector<std::string>& comments) {
  std::vector<std::string> cols = {"family_code", "b_hz",      "t_s",
                                   "t_delta_s",   "delta_lv_m", "delta_mv_m",
                                   "d_max_10us_m", "d_max_100us_m",
                                   "d_max_1ms_m",  "d_max_10ms_m"};
  std::vector<std::vector<double>> data;
  data.reserve(rows.size());
  for (const auto& r : rows) {
    data.push_back({double(static_cast<int>(family)), r.bandwidth_hz,
                    r.duration_s, r.t_delta_s, r.delta_lv_m, r.delta_mv_m,
                    r.d_max_m[0], r.d_max_m[1], r.d_max_m[2], r.d_max_m[3]});
  }
  write_csv(path, comments, cols, data);
}

}  // namespace plctdr
