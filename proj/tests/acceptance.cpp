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
// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <unistd.h>

#include "fixtures.hpp"
#include "itoffoli/cli.hpp"

using namespace itoffoli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

RunConfig load(const std::string& name) { return parse_config(cli::read_json_file(fixtures::config_path(name))); }

struct Calibrated {
  RunConfig config;
  DriveSignal pulse;
  GateRun run;
  std::size_t evaluations = 0;
};

Calibrated calibrate(RunConfig c) {
  const ResolvedModel r = resolve_model(c);
  const GateSimulator sim = cli::make_simulator(c, r);
  const DriveSignal start = resolve_pulse(c, sim);
  SimplexOptions o;
  o.budget = c.calibration.budget;
  o.restarts = c.calibration.restarts;
  o.step = c.calibration.step;
  o.seed = c.seed;
  const CalibrationResult res = calibrate_pulse([&](const DriveSignal& s) { return sim.run(s).report; }, start,
                                                free_parameters(c.calibration, start), o,
                                                c.calibration.target_fidelity);
  return {c, res.best, sim.run(res.best), res.evaluations};
}

// Worst unitarity and norm errors seen by any propagation in this run.
struct Quality {
  double unitarity = 0.0;
  double norm_drift = 0.0;
  void add(const GateRun& r) { unitarity = std::max(unitarity, r.gate.unitarity_error); }
  void add(const PopulationTrace& t) {
    for (double n : t.norm) norm_drift = std::max(norm_drift, std::abs(n - 1.0));
  }
};

Outcome gate_criterion(const Calibrated& k, double threshold) {
  const double f = k.run.report.fidelity;
  return {f >= threshold, "F_p " + fmt(f) + " after " + std::to_string(k.evaluations) + " evaluations (need >= " +
                              fmt(threshold) + ")"};
}

Outcome shift_table() {
  const RunConfig c = load("reference_bare.json");
  const ExactShifts x = cli::exact_shifts(c, resolve_model(c));
  const double chi12 = units::to_mhz(x.chi12), chi23 = units::to_mhz(x.chi23), chi13 = units::to_mhz(x.chi13);
  const bool ok = std::abs(chi12 / -5.1 - 1.0) <= 0.2 && std::abs(chi23 / -4.95 - 1.0) <= 0.2 && std::abs(chi13) < 0.2;
  return {ok, "chi12 " + fmt(chi12) + " MHz, chi23 " + fmt(chi23) + " MHz, chi13 " + fmt(chi13) + " MHz"};
}

Outcome third_order() {
  const RunConfig c = load("reference_bare.json");
  const EffectiveParams e = resolve_model(c).effective;
  const double value = units::to_mhz(chi3_123(e));
  const double lo = chi3_123(fixtures::scaled_couplings(e, 0.5)), hi = chi3_123(fixtures::scaled_couplings(e, 2.0));
  const double exponent = std::log(hi / lo) / std::log(4.0);
  const bool ok = value >= 0.3 && value <= 0.9 && std::abs(exponent - 3.0) <= 1e-3;
  return {ok, "chi3_123 " + fmt(value) + " MHz, exponent " + fmt(exponent, 8)};
}

EffectiveParams random_draw(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (true) {
    EffectiveParams e;
    e.frequency = {units::ghz(4.85 + 0.2 * u(rng)), units::ghz(5.25 + 0.1 * u(rng)), units::ghz(4.65 + 0.2 * u(rng))};
    e.anharmonicity = {units::mhz(-220 - 120 * u(rng)), units::mhz(-180 - 100 * u(rng)),
                       units::mhz(-220 - 120 * u(rng))};
    const double r = 0.015 * u(rng) + 0.005;
    e.g12 = r * std::abs(e.delta(0, 1));
    e.g23 = r * std::abs(e.delta(1, 2));
    e.g13 = 0.2 * r * std::abs(e.delta(0, 2));
    bool near = false;
    for (double d : {e.anharmonicity[0] + e.delta(0, 1), e.anharmonicity[1] + e.delta(1, 0),
                     e.anharmonicity[1] + e.delta(1, 2), e.anharmonicity[2] + e.delta(2, 1),
                     e.anharmonicity[0] + e.delta(0, 2), e.anharmonicity[2] + e.delta(2, 0)})
      near = near || std::abs(d) < units::mhz(60);
    if (!near) return e;
  }
}

std::array<double, 2> pair_residuals(const EffectiveParams& e, std::array<double, 2>* ratios = nullptr) {
  const auto h = build_effective_hamiltonian(e, ModeLayout::uniform(3, 4), std::nullopt, {Frame::lab, CouplingForm::charge});
  const ExactShifts x = dispersive_shifts_exact(labeled_spectrum(h.static_part, h.layout));
  const DispersiveShifts p = shift_report(e);
  if (ratios) *ratios = {p.chi12.total / x.chi12, p.chi23.total / x.chi23};
  return {std::abs(p.chi12.total - x.chi12), std::abs(p.chi23.total - x.chi23)};
}

Outcome oracle_equivalence() {
  std::mt19937 rng(20260);
  double worst_ratio = 0.0, min_exponent = std::numeric_limits<double>::infinity();
  std::vector<double> exponents;
  for (int k = 0; k < 20; ++k) {
    const EffectiveParams e = random_draw(rng);
    std::array<double, 2> ratios{};
    const auto r1 = pair_residuals(e, &ratios);
    const auto r2 = pair_residuals(fixtures::scaled_couplings(e, 0.5));
    for (int i = 0; i < 2; ++i) {
      worst_ratio = std::max(worst_ratio, std::abs(ratios[i] - 1.0));
      exponents.push_back(std::log(r1[i] / r2[i]) / std::log(2.0));
    }
  }
  std::sort(exponents.begin(), exponents.end());
  min_exponent = exponents.front();
  const double median = 0.5 * (exponents[19] + exponents[20]);
  const bool ok = worst_ratio <= 0.10 && median >= 3.5;
  return {ok, "worst relative error " + fmt(worst_ratio) + ", residual exponent median " + fmt(median) + " min " +
                  fmt(min_exponent)};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& f : fs::directory_iterator(dir)) {
    std::ifstream in(f.path(), std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    out[f.path().filename().string()] = s.str();
  }
  return out;
}

Outcome determinism(const Calibrated& k) {
  const fs::path dir = fs::temp_directory_path() / ("itoffoli_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  RunConfig c = k.config;
  c.output_dir = dir.string();
  store_pulse(c, k.pulse);
  std::ostringstream log;
  cli::cmd_gate(c, log);
  const auto first = snapshot(dir);
  cli::cmd_gate(c, log);
  const auto second = snapshot(dir);
  fs::remove_all(dir);
  return {first == second && !first.empty(), std::to_string(first.size()) + " files compared"};
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  std::map<int, Outcome> results;
  auto report = [&](int n, const Outcome& o) {
    results[n] = o;
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << "  [" << fmt(s, 4)
              << " s]" << std::endl;
  };
  auto guarded = [&](int n, auto&& body) {
    try {
      report(n, body());
    } catch (const std::exception& e) {
      report(n, {false, std::string("error: ") + e.what()});
    }
  };

  Quality quality;
  std::optional<Calibrated> headline;

  guarded(1, [&] {
    headline = calibrate(load("headline_500ns.json"));
    quality.add(headline->run);
    return gate_criterion(*headline, 0.975);
  });
  guarded(2, [&] {
    const Calibrated fast = calibrate(load("fast_350ns.json"));
    quality.add(fast.run);
    return gate_criterion(fast, 0.96);
  });
  guarded(3, shift_table);
  guarded(4, third_order);
  guarded(5, oracle_equivalence);

  guarded(7, [&]() -> Outcome {
    if (!headline) throw NumericalError("criterion 1 calibration unavailable");
    const ResolvedModel r = resolve_model(headline->config);
    const GateSimulator sim = cli::make_simulator(headline->config, r);
    const Matrix& u = headline->run.gate.u_sim;
    const double transfer = std::norm(u(7, 5));
    double retained = 1.0;
    for (int k : {0, 1, 4, 2, 6, 3}) retained = std::min(retained, std::norm(u(k, k)));
    const auto times = cli::sample_times(headline->config.pulse.gate_time_ns, headline->config.propagation.samples);
    for (int label : {5, 7}) quality.add(sim.populations(headline->pulse, label, times));
    return {transfer > 0.96 && retained > 0.98,
            "P(101->111) " + fmt(transfer) + ", worst retained population " + fmt(retained)};
  });

  guarded(8, [&]() -> Outcome {
    if (!headline) throw NumericalError("criterion 1 calibration unavailable");
    const RunConfig tc = load("two_level_500ns.json");
    const GateSimulator two(resolve_model(tc).spec, gate_options(tc), headline->config.pulse.gate_time_ns);
    const GateSimulator three = cli::make_simulator(headline->config, resolve_model(headline->config));
    // Same pulse shape and the same detuning from each model's own transition.
    DriveSignal d = headline->pulse;
    d.frequency = two.transition_frequency() + (headline->pulse.frequency - three.transition_frequency());
    const GateRun run = two.run(d);
    quality.add(run);
    const double diff = std::abs(run.report.fidelity - headline->run.report.fidelity);
    return {diff <= 0.02, "two-level F_p " + fmt(run.report.fidelity) + ", three-mode F_p " +
                              fmt(headline->run.report.fidelity) + ", difference " + fmt(diff)};
  });

  guarded(6, [&]() -> Outcome {
    if (!headline) throw NumericalError("criterion 1 calibration unavailable");
    RunConfig c = headline->config;
    c.propagation.rtol *= 0.5;
    c.propagation.atol *= 0.5;
    const GateSimulator fine = cli::make_simulator(c, resolve_model(c));
    const GateRun run = fine.run(headline->pulse);
    quality.add(run);
    const double change = std::abs(run.report.fidelity - headline->run.report.fidelity);
    const bool ok = quality.unitarity < 1e-8 && quality.norm_drift < 1e-8 && change < 1e-4;
    return {ok, "max |U^dag U - I| " + fmt(quality.unitarity, 3) + ", norm drift " + fmt(quality.norm_drift, 3) +
                    ", tolerance halving dF " + fmt(change, 3)};
  });

  guarded(9, [&]() -> Outcome {
    if (!headline) throw NumericalError("criterion 1 calibration unavailable");
    return determinism(*headline);
  });

  std::size_t failed = 0;
  for (const auto& [n, o] : results) failed += o.pass ? 0 : 1;
  std::cout << "summary: " << results.size() - failed << " of " << results.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
