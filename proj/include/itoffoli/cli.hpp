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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "itoffoli/config.hpp"
#include "itoffoli/drive_frequency.hpp"
#include "itoffoli/io.hpp"

namespace itoffoli::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_numerical = 3;

// Command-line overrides applied on top of the config file.
struct Overrides {
  std::optional<std::string> method;
  std::optional<std::size_t> jobs;
  std::optional<std::string> out;
  std::optional<unsigned long> seed;
  std::optional<int> levels;
};

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

// For shifts the method selects the shift methods; for the time-domain
// commands it selects the integrator.
inline RunConfig load_config(json j, const std::string& command, const Overrides& o) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (o.out) j["output_dir"] = *o.out;
  if (o.seed) j["seed"] = *o.seed;
  if (o.levels) j["model"]["levels"] = *o.levels;
  if (o.method) {
    if (command == "shifts")
      j["method"] = *o.method;
    else
      j["propagation"]["integrator"] = *o.method;
  }
  return parse_config(j);
}

inline std::filesystem::path out_dir(const RunConfig& c) { return c.output_dir; }

inline json derive_json(const RunConfig& c, const ResolvedModel& r) {
  json j;
  j["input_mode"] = to_string(c.input_mode);
  if (c.circuit) {
    const CircuitSpec s = circuit_from_block(*c.circuit);
    const EffectiveCapacitances caps = reduce_capacitance_network(s, c.circuit->reduction);
    auto ff = [](double farad) { return farad / units::femto; };
    auto inv_ff = [](double inv) { return inv * units::femto; };
    j["reduction"] = to_string(c.circuit->reduction);
    j["effective_capacitances_ff"] = {{"qubits", {ff(caps.qubit[0]), ff(caps.qubit[1]), ff(caps.qubit[2])}},
                                      {"couplers", {ff(caps.coupler[0]), ff(caps.coupler[1])}}};
    j["inverse_capacitances_per_ff"] = {{"12", inv_ff(caps.inv_12)},   {"23", inv_ff(caps.inv_23)},
                                        {"13", inv_ff(caps.inv_13)},   {"1c1", inv_ff(caps.inv_1c1)},
                                        {"1c2", inv_ff(caps.inv_1c2)}, {"2c1", inv_ff(caps.inv_2c1)},
                                        {"2c2", inv_ff(caps.inv_2c2)}, {"3c2", inv_ff(caps.inv_3c2)}};
    j["hierarchy_warnings"] = check_hierarchy(s);
  }
  if (r.bare) j["bare"] = io::bare_json(*r.bare);
  j["dressing"] = to_string(c.model.dressing);
  j["effective"] = io::effective_json(r.effective);
  if (r.residual) j["residual_couplings"] = io::residual_json(*r.residual);
  const DispersiveShifts s = shift_report(r.effective, std::nullopt, false);
  j["shifts_order2_mhz"] = {{"chi12", units::to_mhz(s.chi12.order2)},
                            {"chi23", units::to_mhz(s.chi23.order2)},
                            {"chi13", units::to_mhz(s.chi13.order2)}};
  j["drive_frequency_order2_ghz"] = units::to_ghz(drive_frequency(r.effective, s));
  return j;
}

inline int cmd_derive(const RunConfig& c, std::ostream& log) {
  const ResolvedModel r = resolve_model(c);
  io::write_json(out_dir(c) / "derive.json", derive_json(c, r));
  log << "derive: wrote " << (out_dir(c) / "derive.json").string() << "\n";
  return exit_ok;
}

// Exact shifts from the undriven model: full 5-mode when bare parameters
// exist, the effective model otherwise.
inline ExactShifts exact_shifts(const RunConfig& c, const ResolvedModel& r) {
  if (r.bare) {
    FullModelOptions o;
    o.qubit_coupling_sign = c.model.qubit_coupling_sign;
    o.coupler_coupling_sign = c.model.coupler_coupling_sign;
    const auto h = build_full_hamiltonian(*r.bare, ModeLayout::uniform(5, c.model.levels), std::nullopt, o);
    return dispersive_shifts_exact(labeled_spectrum(h.static_part, h.layout));
  }
  const auto h = build_effective_hamiltonian(r.effective, ModeLayout::uniform(3, c.model.levels), std::nullopt,
                                             {Frame::lab, c.model.coupling_form});
  return dispersive_shifts_exact(labeled_spectrum(h.static_part, h.layout));
}

struct ShiftRow {
  std::string quantity, method, status, message;
  std::optional<double> value;
};

inline std::vector<ShiftRow> shift_rows(const RunConfig& c, const ResolvedModel& r) {
  const bool pt2 = c.method == "pt2" || c.method == "pt3" || c.method == "all";
  const bool pt3 = c.method == "pt3" || c.method == "all";
  const bool exact = c.method == "exact" || c.method == "all";
  const std::vector<std::string> names{"chi12", "chi23", "chi13", "chi123", "chi123_three_body"};
  std::vector<ShiftRow> rows;
  auto failed = [&](const std::string& method, const std::string& message) {
    for (const auto& n : names) rows.push_back({n, method, "failed", message, std::nullopt});
  };
  std::optional<DispersiveShifts> second, third;
  if (pt2) {
    try {
      second = shift_report(r.effective, std::nullopt, false);
    } catch (const ResonanceError& e) {
      failed("perturbative_2", e.what());
    }
  }
  if (pt3) {
    try {
      third = shift_report(r.effective, std::nullopt, true);
    } catch (const ResonanceError& e) {
      failed("perturbative_3", e.what());
    }
  }
  auto entries = [](const DispersiveShifts& s) {
    return std::vector<const ShiftEntry*>{&s.chi12, &s.chi23, &s.chi13, &s.chi123, &s.three_body};
  };
  if (second) {
    const auto e = entries(*second);
    for (std::size_t i = 0; i < names.size(); ++i) rows.push_back({names[i], "perturbative_2", "ok", "", e[i]->order2});
  }
  if (third) {
    const auto e = entries(*third);
    for (std::size_t i = 0; i < names.size(); ++i)
      rows.push_back({names[i], "perturbative_3", "ok", "", e[i]->total});
  }
  if (exact) {
    try {
      const ExactShifts x = exact_shifts(c, r);
      const std::vector<double> v{x.chi12, x.chi23, x.chi13, x.chi123, x.three_body()};
      for (std::size_t i = 0; i < names.size(); ++i) rows.push_back({names[i], "exact", "ok", "", v[i]});
    } catch (const LabelingError& e) {
      failed("exact", e.what());
    }
  }
  return rows;
}

inline std::string csv_text(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n') ch = ';';
  return s;
}

// Rows for methods that fail (resonance, labeling) are written with status
// "failed"; the command still succeeds if any method produced values.
inline int cmd_shifts(const RunConfig& c, std::ostream& log) {
  const ResolvedModel r = resolve_model(c);
  const auto rows = shift_rows(c, r);
  io::Csv csv({"quantity", "method", "value_mhz", "status", "message"});
  json j = json::array();
  bool any_ok = false;
  for (const auto& row : rows) {
    any_ok = any_ok || row.status == "ok";
    csv.row({row.quantity, row.method, row.value ? io::num(units::to_mhz(*row.value)) : "", row.status,
             csv_text(row.message)});
    j.push_back({{"quantity", row.quantity},
                 {"method", row.method},
                 {"value_mhz", row.value ? json(units::to_mhz(*row.value)) : json(nullptr)},
                 {"status", row.status},
                 {"message", row.message}});
  }
  io::write_text(out_dir(c) / "shifts.csv", csv.str());
  io::write_json(out_dir(c) / "shifts.json", j);
  log << "shifts: wrote " << rows.size() << " rows to " << (out_dir(c) / "shifts.csv").string() << "\n";
  for (const auto& row : rows)
    if (row.status != "ok") log << "shifts: " << row.method << " failed: " << row.message << "\n";
  return any_ok ? exit_ok : exit_numerical;
}

inline std::vector<double> sample_times(double gate_time, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = gate_time * static_cast<double>(k) / static_cast<double>(n - 1);
  return t;
}

inline GateSimulator make_simulator(const RunConfig& c, const ResolvedModel& r) {
  return GateSimulator(r.spec, gate_options(c), c.pulse.gate_time_ns);
}

inline int cmd_gate(RunConfig c, std::ostream& log) {
  const ResolvedModel r = resolve_model(c);
  const GateSimulator sim = make_simulator(c, r);
  const DriveSignal drive = resolve_pulse(c, sim);
  log << "gate: propagating " << c.pulse.gate_time_ns << " ns\n";
  const GateRun run = sim.run(drive);
  const auto dir = out_dir(c);

  json g;
  g["pulse"] = io::pulse_json(drive);
  g["transition_frequency_ghz"] = units::to_ghz(sim.transition_frequency());
  g["model"] = to_string(c.model.kind);
  g["effective"] = io::effective_json(r.effective);
  g["report"] = io::report_json(run.report, run.gate);
  io::write_json(dir / "gate.json", g);
  io::write_json(dir / "unitary_raw.json", io::matrix_json(run.gate.u_sim));
  io::write_json(dir / "unitary_corrected.json", io::matrix_json(run.report.corrected));
  io::write_text(dir / "unitary_magnitude.csv", io::magnitude_csv(run.report.corrected));
  io::write_text(dir / "waveform.csv", io::waveform_csv(drive, c.propagation.samples));

  const auto times = sample_times(c.pulse.gate_time_ns, c.propagation.samples);
  for (int label : {5, 7}) {
    const auto trace = sim.populations(drive, label, times);
    io::write_text(dir / ("populations_" + io::computational_names()[static_cast<std::size_t>(label)] + ".csv"),
                   io::population_csv(trace));
  }
  store_pulse(c, drive);
  io::write_json(dir / "resolved_config.json", to_json(c));
  log << "gate: F_p = " << io::num(run.report.fidelity) << ", max leakage = " << io::num(run.report.max_leakage)
      << "\n";
  return exit_ok;
}

inline std::string trace_csv(const std::vector<double>& trace) {
  io::Csv csv({"evaluation", "infidelity", "best_infidelity"});
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < trace.size(); ++k) {
    best = std::min(best, trace[k]);
    csv.row({std::to_string(k + 1), io::num(trace[k]), io::num(best)});
  }
  return csv.str();
}

inline int cmd_calibrate(RunConfig c, std::ostream& log) {
  const ResolvedModel r = resolve_model(c);
  const GateSimulator sim = make_simulator(c, r);
  const DriveSignal start = resolve_pulse(c, sim);
  const auto free = free_parameters(c.calibration, start);
  SimplexOptions o;
  o.budget = c.calibration.budget;
  o.restarts = c.calibration.restarts;
  o.step = c.calibration.step;
  o.seed = c.seed;
  std::size_t count = 0;
  auto simulate = [&](const DriveSignal& s) {
    const FidelityReport rep = sim.run(s).report;
    if (++count % 10 == 0) log << "calibrate: " << count << " evaluations, last F_p " << io::num(rep.fidelity) << "\n";
    return rep;
  };
  const CalibrationResult res = calibrate_pulse(simulate, start, free, o, c.calibration.target_fidelity);
  store_pulse(c, res.best);
  json j;
  j["start_pulse"] = io::pulse_json(start);
  j["best_pulse"] = io::pulse_json(res.best);
  j["process_fidelity"] = res.report.fidelity;
  j["max_leakage"] = res.report.max_leakage;
  j["evaluations"] = res.evaluations;
  j["target_fidelity"] = c.calibration.target_fidelity;
  j["target_met"] = res.target_met;
  j["budget_exhausted"] = res.budget_exhausted;
  j["free"] = c.calibration.free;
  const auto dir = out_dir(c);
  io::write_json(dir / "calibration.json", j);
  io::write_text(dir / "calibration_trace.csv", trace_csv(res.trace));
  io::write_json(dir / "calibrated_config.json", to_json(c));
  log << "calibrate: F_p = " << io::num(res.report.fidelity) << " after " << res.evaluations << " evaluations\n";
  return exit_ok;
}

// Key identifying a sweep row across runs: the grid point values.
inline std::string point_key(const std::vector<double>& point) {
  std::string k;
  for (double v : point) k += io::num(v) + ";";
  return k;
}

inline const std::vector<std::string>& sweep_metric_names() {
  static const std::vector<std::string> names{"process_fidelity", "process_fidelity_two_body", "max_leakage",
                                              "mean_leakage", "unitarity_error", "transition_frequency_ghz"};
  return names;
}

inline std::string sweep_line(const SweepRow& row) {
  std::string line = std::to_string(row.index);
  for (double v : row.point) line += "," + io::num(v);
  line += row.ok ? ",ok" : ",failed";
  for (const auto& m : sweep_metric_names()) {
    const auto it = row.metrics.find(m);
    line += "," + (it != row.metrics.end() ? io::num(it->second) : std::string());
  }
  line += "," + csv_text(row.message);
  return line;
}

// Reads completed rows of an earlier sweep.csv, keyed by grid point. Lines
// whose header or shape differ are ignored.
inline std::map<std::string, std::string> completed_rows(const std::filesystem::path& path, const std::string& header,
                                                         std::size_t n_axes) {
  std::map<std::string, std::string> done;
  std::ifstream in(path);
  std::string line;
  if (!in || !std::getline(in, line) || line != header) return done;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cells.size() != n_axes + 3 + sweep_metric_names().size() || cells[n_axes + 1] != "ok") continue;
    std::vector<double> point;
    try {
      for (std::size_t a = 0; a < n_axes; ++a) point.push_back(std::stod(cells[a + 1]));
    } catch (const std::exception&) {
      continue;
    }
    done[point_key(point)] = line.substr(line.find(','));
  }
  return done;
}

inline int cmd_sweep(const RunConfig& c, std::size_t jobs, std::ostream& log) {
  if (c.sweep.axes.empty()) throw ConfigError("sweep.axes: at least one axis is required");
  const json base = to_json(c);
  std::vector<std::string> header{"index"};
  for (const auto& a : c.sweep.axes) header.push_back(a.name);
  header.push_back("status");
  for (const auto& m : sweep_metric_names()) header.push_back(m);
  header.push_back("message");
  std::string header_line;
  for (std::size_t i = 0; i < header.size(); ++i) header_line += (i ? "," : "") + header[i];

  const auto path = out_dir(c) / "sweep.csv";
  const auto points = sweep_points(c.sweep.axes);
  const auto done = completed_rows(path, header_line, c.sweep.axes.size());
  std::filesystem::create_directories(out_dir(c));

  // Each finished row is appended at once so an interrupted sweep can resume.
  std::ofstream partial(path.string() + ".partial", std::ios::app);
  auto evaluate = [&](const std::vector<double>& point) {
    json j = base;
    for (std::size_t a = 0; a < point.size(); ++a) set_path(j, c.sweep.axes[a].name, point[a]);
    const RunConfig rc = parse_config(j);
    const ResolvedModel r = resolve_model(rc);
    const GateSimulator sim = make_simulator(rc, r);
    const GateRun run = sim.run(resolve_pulse(rc, sim));
    return std::map<std::string, double>{{"process_fidelity", run.report.fidelity},
                                         {"process_fidelity_two_body", run.report.fidelity_two_body},
                                         {"max_leakage", run.report.max_leakage},
                                         {"mean_leakage", run.report.mean_leakage},
                                         {"unitarity_error", run.gate.unitarity_error},
                                         {"transition_frequency_ghz", units::to_ghz(sim.transition_frequency())}};
  };
  auto skip = [&](std::size_t i) { return done.count(point_key(points[i])) > 0; };
  std::size_t finished = 0;
  auto on_row = [&](const SweepRow& row) {
    partial << sweep_line(row) << "\n" << std::flush;
    log << "sweep: row " << row.index << " " << (row.ok ? "ok" : "failed: " + row.message) << " (" << ++finished
        << " new)\n";
  };
  const auto rows = parameter_sweep(c.sweep.axes, evaluate, jobs, skip, on_row);
  partial.close();

  std::string content = header_line + "\n";
  std::size_t failures = 0;
  for (const auto& row : rows) {
    const auto it = done.find(point_key(row.point));
    if (it != done.end())
      content += std::to_string(row.index) + it->second + "\n";
    else
      content += sweep_line(row) + "\n";
    if (!row.ok) ++failures;
  }
  io::write_text(path, content);
  std::filesystem::remove(path.string() + ".partial");
  log << "sweep: " << rows.size() << " rows, " << done.size() << " reused, " << failures << " failed\n";
  return exit_ok;
}

// Runs a command and maps exceptions to exit codes.
inline int dispatch(const std::string& command, const json& config, const Overrides& o, std::ostream& log) {
  try {
    const RunConfig c = load_config(config, command, o);
    if (o.jobs && *o.jobs == 0) throw ConfigError("--jobs must be >= 1");
    if (command == "derive") return cmd_derive(c, log);
    if (command == "shifts") return cmd_shifts(c, log);
    if (command == "gate") return cmd_gate(c, log);
    if (command == "calibrate") return cmd_calibrate(c, log);
    if (command == "sweep") return cmd_sweep(c, o.jobs.value_or(1), log);
    throw ConfigError("unknown command " + command);
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const NumericalError& e) {
    log << "numerical failure: " << e.what() << "\n";
    return exit_numerical;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const json::exception& e) {
    log << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const std::exception& e) {
    log << "numerical failure: " << e.what() << "\n";
    return exit_numerical;
  }
}

}  // namespace itoffoli::cli
