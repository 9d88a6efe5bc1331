// Copyright 2026 The itoffoli Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "itoffoli/config.hpp"
#include "itoffoli/dynamics.hpp"
#include "itoffoli/fidelity.hpp"
#include "itoffoli/perturbation.hpp"
#include "itoffoli/pulses.hpp"
#include "itoffoli/spectrum.hpp"
#include "itoffoli/units.hpp"

namespace itoffoli::io {

// Shortest representation that round-trips.
inline std::string num(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

inline void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

inline void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) { row(header); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

inline json matrix_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  return {{"dims", {m.rows(), m.cols()}}, {"re", re}, {"im", im}};
}

inline Matrix matrix_from_json(const json& j) {
  const auto rows = j.at("dims").at(0).get<Eigen::Index>();
  const auto cols = j.at("dims").at(1).get<Eigen::Index>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != static_cast<std::size_t>(rows * cols) || im.size() != re.size())
    throw ConfigError("matrix json: entry count does not match dims");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k) {
      const auto idx = static_cast<std::size_t>(i * cols + k);
      m(i, k) = complex(re[idx].get<double>(), im[idx].get<double>());
    }
  return m;
}

inline std::vector<std::string> computational_names() {
  return {"000", "001", "010", "011", "100", "101", "110", "111"};
}

// |U| table, rows = output label, columns = input label.
inline std::string magnitude_csv(const Matrix& u) {
  auto names = computational_names();
  std::vector<std::string> header{"output"};
  for (const auto& n : names) header.push_back("in_" + n);
  Csv csv(header);
  for (int i = 0; i < 8; ++i) {
    std::vector<std::string> row{names[static_cast<std::size_t>(i)]};
    for (int j = 0; j < 8; ++j) row.push_back(num(std::abs(u(i, j))));
    csv.row(row);
  }
  return csv.str();
}

inline std::string population_csv(const PopulationTrace& trace) {
  std::vector<std::string> header{"t_ns"};
  for (const auto& n : computational_names()) header.push_back("p_" + n);
  header.push_back("norm");
  Csv csv(header);
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    std::vector<std::string> row{num(trace.times[k])};
    for (double p : trace.populations[k]) row.push_back(num(p));
    row.push_back(num(trace.norm[k]));
    csv.row(row);
  }
  return csv.str();
}

inline std::string waveform_csv(const DriveSignal& s, std::size_t samples) {
  Csv csv({"t_ns", "envelope_mhz", "derivative_mhz_per_ns", "omega_lab_mhz"});
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = s.gate_time * static_cast<double>(k) / static_cast<double>(samples - 1);
    csv.row({num(t), num(units::to_mhz(gaussian_envelope(t, s))), num(units::to_mhz(envelope_derivative(t, s))),
             num(units::to_mhz(drag_drive(t, s)))});
  }
  return csv.str();
}

inline std::string spectrum_csv(const LabeledSpectrum& s) {
  Csv csv({"label", "energy_ghz", "overlap"});
  for (const auto& l : s.levels) csv.row({label_string(l.label), num(units::to_ghz(l.energy)), num(l.overlap)});
  return csv.str();
}

inline json entry_json(const ShiftEntry& e) {
  auto mhz = [](const std::optional<double>& v) { return v ? json(units::to_mhz(*v)) : json(nullptr); };
  return {{"order2_mhz", units::to_mhz(e.order2)},
          {"order3_mhz", mhz(e.order3)},
          {"total_mhz", units::to_mhz(e.total)},
          {"exact_mhz", mhz(e.exact)},
          {"methods", e.methods}};
}

inline json shifts_json(const DispersiveShifts& s) {
  return {{"chi12", entry_json(s.chi12)},
          {"chi23", entry_json(s.chi23)},
          {"chi13", entry_json(s.chi13)},
          {"chi123", entry_json(s.chi123)},
          {"chi123_three_body", entry_json(s.three_body)}};
}

inline json effective_json(const EffectiveParams& e) {
  return {{"qubit_frequencies_ghz", {units::to_ghz(e.frequency[0]), units::to_ghz(e.frequency[1]), units::to_ghz(e.frequency[2])}},
          {"anharmonicities_mhz", {units::to_mhz(e.anharmonicity[0]), units::to_mhz(e.anharmonicity[1]), units::to_mhz(e.anharmonicity[2])}},
          {"couplings_mhz", {{"g12", units::to_mhz(e.g12)}, {"g23", units::to_mhz(e.g23)}, {"g13", units::to_mhz(e.g13)}}},
          {"dispersive", e.dispersive},
          {"max_coupler_ratio", e.max_coupler_ratio}};
}

inline json bare_json(const BareParams& b) {
  auto ghz3 = [](const std::array<double, 3>& a) { return json{units::to_ghz(a[0]), units::to_ghz(a[1]), units::to_ghz(a[2])}; };
  auto mhz3 = [](const std::array<double, 3>& a) { return json{units::to_mhz(a[0]), units::to_mhz(a[1]), units::to_mhz(a[2])}; };
  auto ghz2 = [](const std::array<double, 2>& a) { return json{units::to_ghz(a[0]), units::to_ghz(a[1])}; };
  auto mhz2 = [](const std::array<double, 2>& a) { return json{units::to_mhz(a[0]), units::to_mhz(a[1])}; };
  return {{"qubit_frequencies_ghz", ghz3(b.qubit_frequency)},
          {"qubit_anharmonicities_mhz", mhz3(b.qubit_anharmonicity)},
          {"coupler_frequencies_ghz", ghz2(b.coupler_frequency)},
          {"coupler_anharmonicities_mhz", mhz2(b.coupler_anharmonicity)},
          {"qubit_couplings_mhz", {{"g12", units::to_mhz(b.g12)}, {"g23", units::to_mhz(b.g23)}, {"g13", units::to_mhz(b.g13)}}},
          {"coupler_couplings_mhz",
           {{"g1c1", units::to_mhz(b.g1c1)}, {"g2c1", units::to_mhz(b.g2c1)}, {"g2c2", units::to_mhz(b.g2c2)}, {"g3c2", units::to_mhz(b.g3c2)}}},
          {"qubit_zero_point_phase", b.qubit_zero_point_phase},
          {"coupler_zero_point_phase", b.coupler_zero_point_phase},
          {"qubit_charging_energy_ghz", b.qubit_charging_energy},
          {"coupler_charging_energy_ghz", b.coupler_charging_energy},
          {"warnings", b.warnings}};
}

inline json residual_json(const ResidualCouplings& r) {
  return {{"g1c1_mhz", units::to_mhz(r.g1c1)},
          {"g2c1_mhz", units::to_mhz(r.g2c1)},
          {"g2c2_mhz", units::to_mhz(r.g2c2)},
          {"g3c2_mhz", units::to_mhz(r.g3c2)},
          {"warnings", r.warnings}};
}

inline json correction_json(const PhaseCorrection& c) {
  return {{"source", to_string(c.source)},
          {"global_rad", c.global},
          {"z_rad", c.z},
          {"zz12_rad", c.zz12},
          {"zz23_rad", c.zz23},
          {"zz13_phase_rad", c.zz13_phase},
          {"three_body_phase_rad", c.three_body_phase},
          {"residual_rad", c.residual},
          {"idle_phases_rad", c.phases},
          {"idle_offdiagonal", c.offdiagonal}};
}

inline json pulse_json(const DriveSignal& s) {
  return {{"envelope", to_string(s.envelope)},
          {"peak_amplitude_mhz", units::to_mhz(s.peak_amplitude)},
          {"gate_time_ns", s.gate_time},
          {"sigma_ns", s.sigma},
          {"drag_beta_ns", s.drag_beta},
          {"drive_frequency_ghz", units::to_ghz(s.frequency)},
          {"phase_rad", s.phase},
          {"flat_top_ns", s.flat_top}};
}

inline json report_json(const FidelityReport& r, const GateResult& g) {
  return {{"process_fidelity", r.fidelity},
          {"process_fidelity_full_idle", r.fidelity_full_idle},
          {"process_fidelity_two_body", r.fidelity_two_body},
          {"correction_scope", to_string(r.scope)},
          {"leakage", r.leakage},
          {"max_leakage", r.max_leakage},
          {"mean_leakage", r.mean_leakage},
          {"unitarity_error", g.unitarity_error},
          {"max_deviation", r.deviation.cwiseAbs().maxCoeff()},
          {"steps", g.stats.steps},
          {"rejected_steps", g.stats.rejected},
          {"correction", correction_json(r.correction)}};
}

}  // namespace itoffoli::io
