// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plctdr/signal.hpp"

namespace plctdr {

using cplx = std::complex<double>;

struct rlgc {
  double r = 0.0;  // ohm/m
  double l = 0.0;  // H/m
  double g = 0.0;  // S/m
  double c = 0.0;  // F/m
};

// Per-unit-length line parameters, constant or tabulated over frequency
// (linear interpolation, clamped at the table ends).
struct cable_params {
  rlgc base;
  std::vector<double> table_f;
  std::vector<rlgc> table_values;

  rlgc at(double f) const;
  double phase_velocity() const;  // 1/sqrt(L'C') of the base parameters
};

void validate(const cable_params& cable);

struct line_params {
  cplx z0;     // characteristic impedance, ohm
  cplx gamma;  // propagation constant, 1/m, Re >= 0
};

// Z0 = sqrt((R'+j2pi f L')/(G'+j2pi f C')), gamma = sqrt of the product.
// The lossless f==0 limit returns Z0 = sqrt(L'/C'), gamma = 0.
line_params secondary_params(const cable_params& cable, double f);

// Terminating impedance as a function of frequency. Open and short are exact;
// rlc variants never divide by zero (impedances are handled projectively).
struct load_model {
  enum class kind { open, short_circuit, resistor, constant, series_rlc,
                    parallel_rlc };
  kind k = kind::open;
  cplx value{0.0, 0.0};  // constant
  double r = 0.0, l = 0.0, c = 0.0;

  // Impedance as a projective pair (v, i): Z = v/i, open = (1, 0).
  std::pair<cplx, cplx> impedance_vi(double f) const;
  cplx impedance(double f) const;  // may be +inf for open-like cases
};

load_model open_load();
load_model short_load();
load_model resistor_load(double ohms);
load_model constant_load(cplx z);

struct branch_tap {
  double length_m = 0.0;
  cable_params cable;
  load_model load;
};

struct network_section {
  double length_m = 0.0;
  cable_params cable;
  // Bridged tap hanging off the junction at this section's far end.
  std::optional<branch_tap> branch;
};

enum class fault_kind { shunt, series };

struct fault_spec {
  std::size_t section_index = 0;
  double offset_m = 0.0;  // from the section's near end
  fault_kind kind = fault_kind::shunt;
  load_model impedance;
};

// Reflectometer side is the near end of sections[0]; the far end of the last
// section ends at `termination` (the feeder, modeled as an impedance).
struct network_topology {
  std::string name;
  std::vector<network_section> sections;
  load_model termination;
  std::optional<fault_spec> fault;

  double total_length() const;
  // Direct round-trip delay to the far termination plus branch stubs.
  double round_trip_time() const;
  network_topology without_fault() const;
  std::uint64_t hash() const;
};

void validate(const network_topology& topo);

// Input impedance seen from the near end. Unbounded evaluations return an
// infinite-magnitude sentinel rather than throwing.
cplx input_impedance(const network_topology& topo, double f);

// (Z_in - Z_plc) / (Z_in + Z_plc); zero denominator throws guard_error.
cplx reflection_coefficient(cplx z_in, cplx z_plc);

// Same, evaluated projectively so open/short inputs are exact.
cplx input_reflection(const network_topology& topo, double f, cplx z_plc);

// n_freq uniformly spaced frequencies 0..f_max inclusive. n_freq-1 should be
// a power of two so the synthesized response has a power-of-two length.
struct frequency_grid {
  double f_max = 0.0;
  std::size_t n_freq = 0;

  double spacing() const { return f_max / static_cast<double>(n_freq - 1); }
  std::size_t n_time() const { return 2 * (n_freq - 1); }
};

frequency_grid default_grid(double bandwidth);  // f_max = 4B, 2^16+1 bins

void validate(const frequency_grid& grid);

// Reflection-channel impulse response: Gamma_in evaluated on the grid,
// extended Hermitian-symmetrically and inverse transformed. Sample rate is
// 2 f_max, duration 1/spacing. Throws guard_error when the topology's
// round-trip delay exceeds 1/spacing (aliasing), naming the required spacing.
sampled_signal impulse_response(const network_topology& topo,
                                const frequency_grid& grid, cplx z_plc);

// Gamma_in sweep export as CSV (f_hz, re, im).
void write_reflection_csv(const std::string& path,
                          const network_topology& topo,
                          const frequency_grid& grid, cplx z_plc,
                          const std::vector<std::string>& comments = {});

// JSON topology document (sections[], branches[] keyed by junction, fault,
// cable library by name, termination and z_plc).
struct topology_file {
  network_topology topology;
  cplx z_plc{50.0, 0.0};
};

topology_file load_topology(const std::string& path);
topology_file parse_topology(const std::string& json_text);
std::string topology_to_json(const network_topology& topo, cplx z_plc);

}  // namespace plctdr
