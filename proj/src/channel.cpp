// SPDX-License-Identifier: Apache-2.0
#include "plctdr/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "plctdr/errors.hpp"
#include "plctdr/fftutil.hpp"
#include "plctdr/io.hpp"
#include "plctdr/scenarios.hpp"

namespace plctdr {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559005768;

// Node state as a projective (voltage, current) pair: Z = v/i. Open circuits
// are (1, 0), shorts (0, 1); no division happens along the cascade.
struct vi_pair {
  cplx v{1.0, 0.0};
  cplx i{0.0, 0.0};

  void rescale() {
    const double s = std::max(std::abs(v), std::abs(i));
    if (s > 0.0 && (s > 1e50 || s < 1e-50)) {
      v /= s;
      i /= s;
    }
  }
};

vi_pair parallel(const vi_pair& a, const vi_pair& b) {
  vi_pair out;
  out.v = a.v * b.v;
  out.i = a.v * b.i + a.i * b.v;
  out.rescale();
  return out;
}

vi_pair series_z(const vi_pair& a, const std::pair<cplx, cplx>& z) {
  // Z_total = Z + v/i with Z = z.first / z.second, kept projective.
  vi_pair out;
  out.v = a.v * z.second + z.first * a.i;
  out.i = a.i * z.second;
  out.rescale();
  return out;
}

cplx sinhc(cplx theta) {
  if (std::abs(theta) < 1e-4) {
    const cplx t2 = theta * theta;
    return 1.0 + t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sinh(theta) / theta;
}

// Propagates the far-end state through a uniform line segment. Formulated
// with the total series impedance and shunt admittance so the lossless DC
// limit needs no special casing.
vi_pair through_line(const vi_pair& far, const cable_params& cable, double f,
                     double length) {
  const rlgc p = cable.at(f);
  const double w = two_pi * f;
  const cplx z_tot = cplx(p.r, w * p.l) * length;
  const cplx y_tot = cplx(p.g, w * p.c) * length;
  const cplx theta = std::sqrt(z_tot * y_tot);
  if (theta.real() > 700.0)
    throw guard_error("through_line: line section is electrically opaque");
  const cplx a = std::cosh(theta);
  const cplx s = sinhc(theta);
  vi_pair out;
  out.v = a * far.v + z_tot * s * far.i;
  out.i = y_tot * s * far.v + a * far.i;
  out.rescale();
  return out;
}

vi_pair stub_input(const branch_tap& branch, double f) {
  const auto z = branch.load.impedance_vi(f);
  vi_pair state{z.first, z.second};
  return through_line(state, branch.cable, f, branch.length_m);
}

vi_pair network_state(const network_topology& topo, double f) {
  const auto z_term = topo.termination.impedance_vi(f);
  vi_pair state{z_term.first, z_term.second};
  for (std::size_t m = topo.sections.size(); m-- > 0;) {
    const network_section& sec = topo.sections[m];
    if (sec.branch) state = parallel(state, stub_input(*sec.branch, f));
    const bool has_fault = topo.fault && topo.fault->section_index == m;
    if (!has_fault) {
      state = through_line(state, sec.cable, f, sec.length_m);
      continue;
    }
    const fault_spec& fault = *topo.fault;
    state = through_line(state, sec.cable, f, sec.length_m - fault.offset_m);
    const auto zf = fault.impedance.impedance_vi(f);
    if (fault.kind == fault_kind::shunt) {
      state = parallel(state, vi_pair{zf.first, zf.second});
    } else {
      state = series_z(state, zf);
    }
    state = through_line(state, sec.cable, f, fault.offset_m);
  }
  return state;
}

}  // namespace

rlgc cable_params::at(double f) const {
  if (table_f.empty()) return base;
  if (f <= table_f.front()) return table_values.front();
  if (f >= table_f.back()) return table_values.back();
  const auto it = std::upper_bound(table_f.begin(), table_f.end(), f);
  const std::size_t hi = static_cast<std::size_t>(it - table_f.begin());
  const std::size_t lo = hi - 1;
  const double w = (f - table_f[lo]) / (table_f[hi] - table_f[lo]);
  auto lerp = [w](double a, double b) { return a + w * (b - a); };
  const rlgc& a = table_values[lo];
  const rlgc& b = table_values[hi];
  return {lerp(a.r, b.r), lerp(a.l, b.l), lerp(a.g, b.g), lerp(a.c, b.c)};
}

double cable_params::phase_velocity() const {
  return 1.0 / std::sqrt(base.l * base.c);
}

void validate(const cable_params& cable) {
  auto check = [](const rlgc& p, const char* where) {
    if (!(p.l > 0.0) || !(p.c > 0.0))
      throw spec_error(std::string("cable_params") + where +
                       ": L' and C' must be positive");
    if (p.r < 0.0 || p.g < 0.0)
      throw spec_error(std::string("cable_params") + where +
                       ": R' and G' must be non-negative");
  };
  check(cable.base, ".base");
  if (cable.table_f.size() != cable.table_values.size())
    throw spec_error("cable_params: table sizes differ");
  if (!std::is_sorted(cable.table_f.begin(), cable.table_f.end()))
    throw spec_error("cable_params: table frequencies must be sorted");
  for (const rlgc& p : cable.table_values) check(p, ".table");
}

line_params secondary_params(const cable_params& cable, double f) {
  if (f < 0.0) throw spec_error("secondary_params: f must be >= 0");
  const rlgc p = cable.at(f);
  const double w = two_pi * f;
  const cplx z(p.r, w * p.l);
  const cplx y(p.g, w * p.c);
  line_params out;
  out.gamma = std::sqrt(z * y);
  if (out.gamma.real() < 0.0) out.gamma = -out.gamma;
  if (std::abs(y) == 0.0) {
    // Lossless DC limit.
    out.z0 = (std::abs(z) == 0.0)
                 ? cplx(std::sqrt(p.l / p.c), 0.0)
                 : cplx(std::numeric_limits<double>::infinity(), 0.0);
  } else {
    out.z0 = std::sqrt(z / y);
  }
  return out;
}

std::pair<cplx, cplx> load_model::impedance_vi(double f) const {
  const double w = two_pi * f;
  switch (k) {
    case kind::open:
      return {cplx(1.0, 0.0), cplx(0.0, 0.0)};
    case kind::short_circuit:
      return {cplx(0.0, 0.0), cplx(1.0, 0.0)};
    case kind::resistor:
      return {cplx(r, 0.0), cplx(1.0, 0.0)};
    case kind::constant:
      return {value, cplx(1.0, 0.0)};
    case kind::series_rlc: {
      // Missing elements (zero value) are simply absent.
      cplx z(r, w * l);
      if (c > 0.0) {
        // Z += 1/(jwC), projectively: (Z jwC + 1) / (jwC)
        const cplx jwc(0.0, w * c);
        return {z * jwc + 1.0, jwc};
      }
      return {z, cplx(1.0, 0.0)};
    }
    case kind::parallel_rlc: {
      cplx y(r > 0.0 ? 1.0 / r : 0.0, w * c);
      if (l > 0.0) {
        // Y += 1/(jwL): state = (jwL, jwL*Y + 1)
        const cplx jwl(0.0, w * l);
        return {jwl, jwl * y + 1.0};
      }
      if (std::abs(y) == 0.0) return {cplx(1.0, 0.0), cplx(0.0, 0.0)};
      return {cplx(1.0, 0.0), y};
    }
  }
  return {cplx(1.0, 0.0), cplx(0.0, 0.0)};
}

cplx load_model::impedance(double f) const {
  const auto [v, i] = impedance_vi(f);
  if (std::abs(i) == 0.0)
    return cplx(std::numeric_limits<double>::infinity(), 0.0);
  return v / i;
}

load_model open_load() { return {}; }

load_model short_load() {
  load_model m;
  m.k = load_model::kind::short_circuit;
  return m;
}

load_model resistor_load(double ohms) {
  load_model m;
  m.k = load_model::kind::resistor;
  m.r = ohms;
  return m;
}

load_model constant_load(cplx z) {
  load_model m;
  m.k = load_model::kind::constant;
  m.value = z;
  return m;
}

double network_topology::total_length() const {
  double acc = 0.0;
  for (const auto& s : sections) acc += s.length_m;
  return acc;
}

double network_topology::round_trip_time() const {
  double acc = 0.0;
  for (const auto& s : sections) {
    acc += 2.0 * s.length_m / s.cable.phase_velocity();
    if (s.branch)
      acc += 2.0 * s.branch->length_m / s.branch->cable.phase_velocity();
  }
  return acc;
}

network_topology network_topology::without_fault() const {
  network_topology copy = *this;
  copy.fault.reset();
  return copy;
}

std::uint64_t network_topology::hash() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& s : sections) {
    const rlgc& p = s.cable.base;
    os << "s" << s.length_m << "," << p.r << "," << p.l << "," << p.g << ","
       << p.c << ";";
    if (s.branch) {
      os << "b" << s.branch->length_m << ","
         << static_cast<int>(s.branch->load.k) << "," << s.branch->load.r
         << "," << s.branch->load.l << "," << s.branch->load.c << ","
         << s.branch->load.value.real() << "," << s.branch->load.value.imag()
         << ";";
    }
  }
  os << "t" << static_cast<int>(termination.k) << "," << termination.r << ","
     << termination.l << "," << termination.c << ","
     << termination.value.real() << "," << termination.value.imag() << ";";
  if (fault) {
    os << "f" << fault->section_index << "," << fault->offset_m << ","
       << static_cast<int>(fault->kind) << ","
       << static_cast<int>(fault->impedance.k) << "," << fault->impedance.r
       << "," << fault->impedance.l << "," << fault->impedance.c << ";";
  }
  return fnv1a(os.str());
}

void validate(const network_topology& topo) {
  if (topo.sections.empty())
    throw spec_error("network_topology: needs at least one section");
  for (std::size_t m = 0; m < topo.sections.size(); ++m) {
    const auto& s = topo.sections[m];
    if (!(s.length_m > 0.0))
      throw spec_error("network_topology: section " + std::to_string(m) +
                       " length must be > 0");
    validate(s.cable);
    if (s.branch) {
      if (!(s.branch->length_m > 0.0))
        throw spec_error("network_topology: branch at junction " +
                         std::to_string(m) + " length must be > 0");
      validate(s.branch->cable);
    }
  }
  if (topo.fault) {
    if (topo.fault->section_index >= topo.sections.size())
      throw spec_error("network_topology: fault section out of range");
    const auto& host = topo.sections[topo.fault->section_index];
    if (!(topo.fault->offset_m > 0.0) ||
        !(topo.fault->offset_m < host.length_m))
      throw spec_error(
          "network_topology: fault offset must lie inside its host section");
  }
}

cplx input_impedance(const network_topology& topo, double f) {
  if (f < 0.0) throw spec_error("input_impedance: f must be >= 0");
  validate(topo);
  const vi_pair state = network_state(topo, f);
  if (std::abs(state.i) == 0.0)
    return cplx(std::numeric_limits<double>::infinity(), 0.0);
  return state.v / state.i;
}

cplx reflection_coefficient(cplx z_in, cplx z_plc) {
  const cplx den = z_in + z_plc;
  if (std::abs(den) == 0.0)
    throw guard_error("reflection_coefficient: Z_in + Z_plc is zero");
  return (z_in - z_plc) / den;
}

cplx input_reflection(const network_topology& topo, double f, cplx z_plc) {
  const vi_pair state = network_state(topo, f);
  const cplx den = state.v + z_plc * state.i;
  if (std::abs(den) == 0.0)
    throw guard_error("input_reflection: singular evaluation at f = " +
                      format_g12(f));
  return (state.v - z_plc * state.i) / den;
}

frequency_grid default_grid(double bandwidth) {
  frequency_grid grid;
  grid.f_max = 4.0 * bandwidth;
  grid.n_freq = (1u << 16) + 1;
  return grid;
}

void validate(const frequency_grid& grid) {
  if (grid.n_freq < 2) throw spec_error("frequency_grid: n_freq must be >= 2");
  if (!(grid.f_max > 0.0))
    throw spec_error("frequency_grid: f_max must be > 0");
}

sampled_signal impulse_response(const network_topology& topo,
                                const frequency_grid& grid, cplx z_plc) {
  validate(grid);
  validate(topo);
  const double df = grid.spacing();
  const double window = 1.0 / df;
  const double rt = topo.round_trip_time();
  if (rt > window) {
    std::ostringstream msg;
    msg << "impulse_response: echo round trip " << format_g12(rt)
        << " s exceeds the grid window " << format_g12(window)
        << " s; need spacing <= " << format_g12(1.0 / rt) << " Hz";
    throw guard_error(msg.str());
  }

  const std::size_t n_time = grid.n_time();
  cvec spectrum(n_time, cplx(0.0, 0.0));
  for (std::size_t k = 0; k < grid.n_freq; ++k) {
    const cplx g = input_reflection(topo, df * double(k), z_plc);
    if (k == 0 || k == grid.n_freq - 1) {
      spectrum[k] = cplx(g.real(), 0.0);  // DC and Nyquist bins are real
    } else {
      spectrum[k] = g;
      spectrum[n_time - k] = std::conj(g);
    }
  }
  ifft(spectrum);

  sampled_signal h;
  h.sample_rate = 2.0 * grid.f_max;
  h.start_time = 0.0;
  h.samples.resize(n_time);
  double peak = 0.0, worst_imag = 0.0;
  for (std::size_t n = 0; n < n_time; ++n) {
    h.samples[n] = df * spectrum[n].real();
    peak = std::max(peak, std::abs(h.samples[n]));
    worst_imag = std::max(worst_imag, std::abs(spectrum[n].imag()) * df);
  }
  if (peak > 0.0 && worst_imag > 1e-9 * peak)
    throw guard_error("impulse_response: non-real synthesis residual");
  return h;
}

void write_reflection_csv(const std::string& path,
                          const network_topology& topo,
                          const frequency_grid& grid, cplx z_plc,
                          const std::vector<std::string>& comments) {
  validate(grid);
  std::vector<std::vector<double>> rows;
  rows.reserve(grid.n_freq);
  const double df = grid.spacing();
  for (std::size_t k = 0; k < grid.n_freq; ++k) {
    const cplx g = input_reflection(topo, df * double(k), z_plc);
    rows.push_back({df * double(k), g.real(), g.imag()});
  }
  write_csv(path, comments, {"f_hz", "re", "im"}, rows);
}

// ---------------------------------------------------------------------------
// JSON topology documents

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& where,
                               const std::string& what) {
  throw spec_error("topology: " + where + ": " + what);
}

cable_params parse_cable(const json& j, const std::string& where) {
  cable_params cable;
  if (j.contains("preset")) {
    return preset_cable(j.at("preset").get<std::string>()).params;
  }
  if (j.contains("table")) {
    for (const auto& row : j.at("table")) {
      if (!row.is_array() || row.size() != 5)
        schema_error(where, "table rows must be [f, R', L', G', C']");
      cable.table_f.push_back(row[0].get<double>());
      cable.table_values.push_back({row[1].get<double>(), row[2].get<double>(),
                                    row[3].get<double>(),
                                    row[4].get<double>()});
    }
    cable.base = cable.table_values.front();
    validate(cable);
    return cable;
  }
  for (const char* key : {"l_per_m", "c_per_m"})
    if (!j.contains(key)) schema_error(where, std::string("missing ") + key);
  cable.base.r = j.value("r_per_m", 0.0);
  cable.base.l = j.at("l_per_m").get<double>();
  cable.base.g = j.value("g_per_m", 0.0);
  cable.base.c = j.at("c_per_m").get<double>();
  validate(cable);
  return cable;
}

load_model parse_load(const json& j, const std::string& where) {
  if (!j.contains("kind")) schema_error(where, "load needs a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "open") return open_load();
  if (kind == "short") return short_load();
  if (kind == "resistor") {
    if (!j.contains("r")) schema_error(where, "resistor load needs 'r'");
    return resistor_load(j.at("r").get<double>());
  }
  if (kind == "constant") {
    return constant_load(cplx(j.value("re", 0.0), j.value("im", 0.0)));
  }
  if (kind == "series-rlc" || kind == "parallel-rlc") {
    load_model m;
    m.k = kind == "series-rlc" ? load_model::kind::series_rlc
                               : load_model::kind::parallel_rlc;
    m.r = j.value("r", 0.0);
    m.l = j.value("l", 0.0);
    m.c = j.value("c", 0.0);
    return m;
  }
  schema_error(where, "unknown load kind '" + kind + "'");
}

json load_to_json(const load_model& m) {
  json j;
  switch (m.k) {
    case load_model::kind::open:
      j["kind"] = "open";
      break;
    case load_model::kind::short_circuit:
      j["kind"] = "short";
      break;
    case load_model::kind::resistor:
      j["kind"] = "resistor";
      j["r"] = m.r;
      break;
    case load_model::kind::constant:
      j["kind"] = "constant";
      j["re"] = m.value.real();
      j["im"] = m.value.imag();
      break;
    case load_model::kind::series_rlc:
    case load_model::kind::parallel_rlc:
      j["kind"] = m.k == load_model::kind::series_rlc ? "series-rlc"
                                                      : "parallel-rlc";
      j["r"] = m.r;
      j["l"] = m.l;
      j["c"] = m.c;
      break;
  }
  return j;
}

}  // namespace

topology_file parse_topology(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw spec_error(std::string("topology: JSON parse error: ") + e.what());
  }

  topology_file out;
  network_topology& topo = out.topology;
  topo.name = j.value("name", std::string{});

  std::map<std::string, cable_params> cables;
  if (j.contains("cables")) {
    for (const auto& [name, body] : j.at("cables").items())
      cables[name] = parse_cable(body, "cables." + name);
  }
  auto cable_ref = [&cables](const json& node,
                             const std::string& where) -> cable_params {
    if (node.is_string()) {
      const std::string name = node.get<std::string>();
      auto it = cables.find(name);
      if (it == cables.end())
        schema_error(where, "unknown cable '" + name + "'");
      return it->second;
    }
    return parse_cable(node, where);
  };

  if (!j.contains("sections") || !j.at("sections").is_array() ||
      j.at("sections").empty())
    schema_error("sections", "need a non-empty array");
  std::size_t idx = 0;
  for (const auto& s : j.at("sections")) {
    const std::string where = "sections[" + std::to_string(idx) + "]";
    network_section sec;
    if (!s.contains("length_m")) schema_error(where, "missing length_m");
    sec.length_m = s.at("length_m").get<double>();
    if (!s.contains("cable")) schema_error(where, "missing cable");
    sec.cable = cable_ref(s.at("cable"), where + ".cable");
    topo.sections.push_back(std::move(sec));
    ++idx;
  }

  if (j.contains("branches")) {
    std::size_t bi = 0;
    for (const auto& b : j.at("branches")) {
      const std::string where = "branches[" + std::to_string(bi) + "]";
      if (!b.contains("at_junction")) schema_error(where, "missing at_junction");
      const auto junction = b.at("at_junction").get<std::size_t>();
      if (junction >= topo.sections.size())
        schema_error(where, "at_junction out of range");
      branch_tap tap;
      if (!b.contains("length_m")) schema_error(where, "missing length_m");
      tap.length_m = b.at("length_m").get<double>();
      if (!b.contains("cable")) schema_error(where, "missing cable");
      tap.cable = cable_ref(b.at("cable"), where + ".cable");
      if (!b.contains("load")) schema_error(where, "missing load");
      tap.load = parse_load(b.at("load"), where + ".load");
      topo.sections[junction].branch = std::move(tap);
      ++bi;
    }
  }

  topo.termination = j.contains("termination")
                         ? parse_load(j.at("termination"), "termination")
                         : open_load();

  if (j.contains("fault")) {
    const auto& f = j.at("fault");
    fault_spec fault;
    if (!f.contains("section")) schema_error("fault", "missing section");
    fault.section_index = f.at("section").get<std::size_t>();
    if (!f.contains("offset_m")) schema_error("fault", "missing offset_m");
    fault.offset_m = f.at("offset_m").get<double>();
    const std::string kind = f.value("kind", std::string("shunt"));
    if (kind == "shunt")
      fault.kind = fault_kind::shunt;
    else if (kind == "series")
      fault.kind = fault_kind::series;
    else
      schema_error("fault.kind", "must be 'shunt' or 'series'");
    if (!f.contains("impedance")) schema_error("fault", "missing impedance");
    fault.impedance = parse_load(f.at("impedance"), "fault.impedance");
    topo.fault = fault;
  }

  if (j.contains("z_plc")) {
    const auto& z = j.at("z_plc");
    if (z.is_number()) {
      out.z_plc = cplx(z.get<double>(), 0.0);
    } else {
      out.z_plc = cplx(z.value("re", 50.0), z.value("im", 0.0));
    }
  }

  validate(topo);
  return out;
}

topology_file load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw spec_error("cannot open topology file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_topology(buf.str());
  } catch (const spec_error& e) {
    throw spec_error(path + ": " + e.what());
  }
}

std::string topology_to_json(const network_topology& topo, cplx z_plc) {
  json j;
  if (!topo.name.empty()) j["name"] = topo.name;
  json sections = json::array();
  json branches = json::array();
  for (std::size_t m = 0; m < topo.sections.size(); ++m) {
    const auto& s = topo.sections[m];
    json js;
    js["length_m"] = s.length_m;
    js["cable"] = {{"r_per_m", s.cable.base.r},
                   {"l_per_m", s.cable.base.l},
                   {"g_per_m", s.cable.base.g},
                   {"c_per_m", s.cable.base.c}};
    sections.push_back(js);
    if (s.branch) {
      json jb;
      jb["at_junction"] = m;
      jb["length_m"] = s.branch->length_m;
      jb["cable"] = {{"r_per_m", s.branch->cable.base.r},
                     {"l_per_m", s.branch->cable.base.l},
                     {"g_per_m", s.branch->cable.base.g},
                     {"c_per_m", s.branch->cable.base.c}};
      jb["load"] = load_to_json(s.branch->load);
      branches.push_back(jb);
    }
  }
  j["sections"] = sections;
  if (!branches.empty()) j["branches"] = branches;
  j["termination"] = load_to_json(topo.termination);
  if (topo.fault) {
    j["fault"] = {
        {"section", topo.fault->section_index},
        {"offset_m", topo.fault->offset_m},
        {"kind", topo.fault->kind == fault_kind::shunt ? "shunt" : "series"},
        {"impedance", load_to_json(topo.fault->impedance)}};
  }
  j["z_plc"] = {{"re", z_plc.real()}, {"im", z_plc.imag()}};
  return j.dump(2);
}

}  // namespace plctdr
