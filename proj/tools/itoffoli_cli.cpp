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
#include <iostream>

#include <CLI11.hpp>

#include "itoffoli/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = itoffoli::cli;
  CLI::App app{"i-Toffoli gate modeling: parameters, dispersive shifts, gate simulation, sweeps, calibration"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> method, out;
  std::optional<std::size_t> jobs;
  std::optional<unsigned long> seed;
  std::optional<int> levels;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"derive", "bare and effective parameters from the configured input"},
      {"shifts", "dispersive shifts by perturbation theory and exact diagonalization"},
      {"gate", "simulate the gate and write unitaries, fidelity and populations"},
      {"sweep", "evaluate the gate over a parameter grid"},
      {"calibrate", "optimize pulse parameters for process fidelity"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--method", method, "shifts: pt2|pt3|exact|all; otherwise integrator magnus4|dopri5");
    sub->add_option("--jobs", jobs, "worker threads for sweep");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--levels", levels, "levels per mode (2-5)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::exit_ok : cli::exit_validation;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  itoffoli::json config;
  try {
    config = cli::read_json_file(config_path);
  } catch (const itoffoli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::exit_validation;
  }
  return cli::dispatch(command, config, {method, jobs, out, seed, levels}, std::cerr);
}
