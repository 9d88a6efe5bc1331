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
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <unistd.h>

#include "fixtures.hpp"
#include "itoffoli/cli.hpp"

using namespace itoffoli;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("itoffoli_" + std::to_string(::getpid()) + "_" + info->name());
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  json config(const std::string& name, const std::string& sub = "out") const {
    json j = cli::read_json_file(fixtures::config_path(name));
    j["output_dir"] = (dir_ / sub).string();
    return j;
  }

  int run(const std::string& command, const json& j, cli::Overrides o = {}) {
    log_.str("");
    return cli::dispatch(command, j, o, log_);
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  static json load(const fs::path& p) { return json::parse(slurp(p)); }

  fs::path dir_;
  std::ostringstream log_;
};

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

std::size_t line_count(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

// ---------------------------------------------------------------- config

TEST_F(CliTest, ConfigRoundTripIsLossless) {
  for (const char* name : {"headline_500ns.json", "fast_350ns.json", "reference_bare.json", "reference_circuit.json",
                           "two_level_500ns.json", "sweep_amplitude.json", "circuit_hierarchy.json"}) {
    const json first = to_json(parse_config(config(name)));
    EXPECT_EQ(to_json(parse_config(first)).dump(), first.dump()) << name;
  }
}

TEST_F(CliTest, SetPathWritesNestedValue) {
  json j = config("headline_500ns.json");
  set_path(j, "pulse.peak_amplitude_mhz", 2.25);
  EXPECT_EQ(parse_config(j).pulse.peak_amplitude_mhz, 2.25);
  set_path(j, "effective.qubit_frequencies_ghz.1", 5.31);
  EXPECT_EQ(parse_config(j).effective->qubit_frequencies_ghz[1], 5.31);
}

TEST_F(CliTest, ExactlyOneParameterBlock) {
  json j = config("headline_500ns.json");
  j["bare"] = config("reference_bare.json")["bare"];
  EXPECT_EQ(run("derive", j), cli::exit_validation);
  EXPECT_NE(log_.str().find("exactly one"), std::string::npos);
  j.erase("bare");
  j.erase("effective");
  EXPECT_EQ(run("derive", j), cli::exit_validation);
}

TEST_F(CliTest, MissingJosephsonEnergyNamesField) {
  json j = config("reference_circuit.json");
  j["circuit"].erase("qubit_josephson_ghz");
  EXPECT_EQ(run("derive", j), cli::exit_validation);
  EXPECT_NE(log_.str().find("circuit.qubit_josephson_ghz"), std::string::npos) << log_.str();
  EXPECT_FALSE(fs::exists(dir_ / "out" / "derive.json"));
}

TEST_F(CliTest, ValidationErrors) {
  json unknown = config("headline_500ns.json");
  unknown["pulse"]["amplitude"] = 1.0;
  EXPECT_EQ(run("gate", unknown), cli::exit_validation);
  EXPECT_NE(log_.str().find("pulse.amplitude"), std::string::npos) << log_.str();

  json negative = config("headline_500ns.json");
  negative["effective"]["qubit_frequencies_ghz"][0] = -4.9;
  EXPECT_EQ(run("derive", negative), cli::exit_validation);

  EXPECT_EQ(run("shifts", config("headline_500ns.json"), {.method = "pt5"}), cli::exit_validation);
  EXPECT_EQ(run("gate", config("headline_500ns.json"), {.method = "euler"}), cli::exit_validation);
  EXPECT_EQ(run("sweep", config("sweep_amplitude.json"), {.jobs = 0}), cli::exit_validation);
  EXPECT_EQ(run("sweep", config("headline_500ns.json")), cli::exit_validation);
  EXPECT_EQ(run("derive", config("headline_500ns.json"), {.levels = 1}), cli::exit_validation);
  EXPECT_EQ(run("frobnicate", config("headline_500ns.json")), cli::exit_validation);
  EXPECT_EQ(run("derive", json::array()), cli::exit_validation);
}

// ---------------------------------------------------------------- derive

TEST_F(CliTest, DeriveFromBareParameters) {
  ASSERT_EQ(run("derive", config("reference_bare.json")), cli::exit_ok) << log_.str();
  const json d = load(dir_ / "out" / "derive.json");
  EXPECT_EQ(d["input_mode"], "bare");
  const double g12 = 12.0 + 55.0 * 55.0 * (1.0 / -2010.0 + 1.0 / -1690.0);
  EXPECT_NEAR(d["effective"]["couplings_mhz"]["g12"].get<double>(), g12, 1e-9);
  EXPECT_TRUE(d.contains("residual_couplings"));
}

// Circuit input reproduces the bare path except for the second-order g13.
TEST_F(CliTest, CircuitAndBarePathsAgree) {
  ASSERT_EQ(run("derive", config("reference_bare.json", "bare")), cli::exit_ok) << log_.str();
  ASSERT_EQ(run("derive", config("reference_circuit.json", "circuit")), cli::exit_ok) << log_.str();
  const json b = load(dir_ / "bare" / "derive.json"), c = load(dir_ / "circuit" / "derive.json");
  EXPECT_FALSE(c["hierarchy_warnings"].empty());
  for (int i = 0; i < 3; ++i)
    EXPECT_NEAR(c["effective"]["qubit_frequencies_ghz"][i].get<double>() / b["effective"]["qubit_frequencies_ghz"][i].get<double>(), 1.0, 1e-3);
  for (const char* g : {"g12", "g23"})
    EXPECT_NEAR(c["effective"]["couplings_mhz"][g].get<double>() / b["effective"]["couplings_mhz"][g].get<double>(), 1.0, 0.01) << g;
  EXPECT_NEAR(c["effective"]["couplings_mhz"]["g13"].get<double>(), 0.0475, 1e-3);
}

// ---------------------------------------------------------------- shifts

namespace {

std::map<std::string, std::string> shift_table(const std::string& csv) {
  std::map<std::string, std::string> out;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto a = line.find(','), b = line.find(',', a + 1), c = line.find(',', b + 1);
    out[line.substr(0, a) + "/" + line.substr(a + 1, b - a - 1)] = line.substr(b + 1, c - b - 1);
  }
  return out;
}

}  // namespace

TEST_F(CliTest, ShiftsReportAllMethods) {
  ASSERT_EQ(run("shifts", config("reference_bare.json")), cli::exit_ok) << log_.str();
  const std::string csv = slurp(dir_ / "out" / "shifts.csv");
  EXPECT_EQ(first_line(csv), "quantity,method,value_mhz,status,message");
  EXPECT_EQ(line_count(csv), 16u);
  const auto t = shift_table(csv);
  EXPECT_NEAR(std::stod(t.at("chi12/exact")), -4.461231, 1e-5);
  EXPECT_NEAR(std::stod(t.at("chi123/exact")), -6.580551, 1e-5);
  EXPECT_EQ(load(dir_ / "out" / "shifts.json").size(), 15u);

  ASSERT_EQ(run("shifts", config("reference_bare.json"), {.method = "pt2", .out = (dir_ / "pt2").string()}), cli::exit_ok);
  EXPECT_EQ(line_count(slurp(dir_ / "pt2" / "shifts.csv")), 6u);
}

TEST_F(CliTest, ZeroCouplingGivesZeroShifts) {
  json j = config("headline_500ns.json");
  j["effective"]["couplings_mhz"] = {{"g12", 0.0}, {"g23", 0.0}, {"g13", 0.0}};
  ASSERT_EQ(run("shifts", j), cli::exit_ok) << log_.str();
  for (const auto& [key, value] : shift_table(slurp(dir_ / "out" / "shifts.csv")))
    EXPECT_NEAR(std::stod(value), 0.0, 1e-9) << key;
}

TEST_F(CliTest, NearResonanceGivesFailureRows) {
  json j = config("headline_500ns.json");
  j["effective"]["qubit_frequencies_ghz"][0] = 5.300 + 0.330 + 0.0002;
  ASSERT_EQ(run("shifts", j), cli::exit_ok) << log_.str();
  const std::string csv = slurp(dir_ / "out" / "shifts.csv");
  EXPECT_NE(csv.find("chi12,perturbative_2,,failed,resonant denominator"), std::string::npos) << csv;
  EXPECT_NE(csv.find("chi12,exact,"), std::string::npos);
  EXPECT_EQ(run("shifts", j, {.method = "pt3"}), cli::exit_numerical);
}

TEST_F(CliTest, LevelsOverrideReachesExactDiagonalization) {
  ASSERT_EQ(run("shifts", config("headline_500ns.json", "l3"), {.method = "exact"}), cli::exit_ok);
  ASSERT_EQ(run("shifts", config("headline_500ns.json", "l4"), {.method = "exact", .levels = 4}), cli::exit_ok);
  const auto a = shift_table(slurp(dir_ / "l3" / "shifts.csv")), b = shift_table(slurp(dir_ / "l4" / "shifts.csv"));
  EXPECT_NEAR(std::stod(a.at("chi123/exact")), -9.118456, 1e-5);
  EXPECT_NEAR(std::stod(b.at("chi123/exact")), -12.970655, 1e-5);
  EXPECT_NEAR(std::stod(a.at("chi12/exact")), std::stod(b.at("chi12/exact")), 1e-9);
}

// ---------------------------------------------------------------- gate

TEST_F(CliTest, GateWritesArtifacts) {
  ASSERT_EQ(run("gate", config("two_level_500ns.json")), cli::exit_ok) << log_.str();
  const fs::path out = dir_ / "out";
  const json u = load(out / "unitary_corrected.json");
  EXPECT_EQ(u["dims"], json::array({8, 8}));
  EXPECT_EQ(u["re"].size(), 64u);
  EXPECT_EQ(u["im"].size(), 64u);
  const Matrix m = io::matrix_from_json(u);
  EXPECT_LT((m * m.adjoint() - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_EQ(first_line(slurp(out / "unitary_magnitude.csv")).substr(0, 14), "output,in_000,");
  const std::string pop = slurp(out / "populations_101.csv");
  EXPECT_EQ(first_line(pop), "t_ns,p_000,p_001,p_010,p_011,p_100,p_101,p_110,p_111,norm");
  EXPECT_EQ(line_count(pop), 1u + 201u);
  EXPECT_TRUE(fs::exists(out / "populations_111.csv"));
  EXPECT_TRUE(fs::exists(out / "waveform.csv"));
  const json g = load(out / "gate.json");
  EXPECT_GT(g["report"]["process_fidelity"].get<double>(), 0.9);
  const json resolved = load(out / "resolved_config.json");
  EXPECT_TRUE(resolved["pulse"].contains("drive_frequency_ghz"));
}

TEST_F(CliTest, ZeroDriveGivesIdentityFidelity) {
  json j = config("two_level_500ns.json");
  j["pulse"]["peak_amplitude_mhz"] = 0.0;
  ASSERT_EQ(run("gate", j), cli::exit_ok) << log_.str();
  EXPECT_NEAR(load(dir_ / "out" / "gate.json")["report"]["process_fidelity"].get<double>(), 0.75, 1e-9);
}

TEST_F(CliTest, GateIsDeterministic) {
  ASSERT_EQ(run("gate", config("two_level_500ns.json", "a")), cli::exit_ok);
  ASSERT_EQ(run("gate", config("two_level_500ns.json", "b")), cli::exit_ok);
  std::size_t files = 0;
  for (const auto& f : fs::directory_iterator(dir_ / "a")) {
    const auto name = f.path().filename();
    if (name == "resolved_config.json") continue;
    EXPECT_EQ(slurp(f.path()), slurp(dir_ / "b" / name)) << name;
    ++files;
  }
  EXPECT_EQ(files, 7u);
}

TEST_F(CliTest, HybridizedModelIsNumericalFailure) {
  json j = config("headline_500ns.json");
  j["effective"]["qubit_frequencies_ghz"] = {5.3, 5.3, 5.3};
  EXPECT_EQ(run("gate", j), cli::exit_numerical);
  EXPECT_NE(log_.str().find("numerical failure"), std::string::npos);
}

// ---------------------------------------------------------------- sweep and calibrate

TEST_F(CliTest, SinglePointSweepEqualsGate) {
  json j = config("two_level_500ns.json");
  j["sweep"] = {{"axes", {{{"path", "pulse.peak_amplitude_mhz"}, {"values", {1.5}}}}}};
  ASSERT_EQ(run("sweep", j), cli::exit_ok) << log_.str();
  ASSERT_EQ(run("gate", j), cli::exit_ok);
  const std::string csv = slurp(dir_ / "out" / "sweep.csv");
  const std::string f = io::num(load(dir_ / "out" / "gate.json")["report"]["process_fidelity"].get<double>());
  EXPECT_NE(csv.find("0,1.5,ok," + f + ","), std::string::npos) << csv << f;
}

TEST_F(CliTest, SweepResumesFromCompletedRows) {
  json j = config("two_level_500ns.json");
  j["sweep"] = {{"axes", {{{"path", "pulse.peak_amplitude_mhz"}, {"values", {1.0, 1.5, 2.0}}},
                          {{"path", "pulse.gate_time_ns"}, {"values", {400, 500}}}}}};
  ASSERT_EQ(run("sweep", j, {.jobs = 2}), cli::exit_ok) << log_.str();
  const fs::path csv = dir_ / "out" / "sweep.csv";
  const std::string full = slurp(csv);
  EXPECT_EQ(line_count(full), 7u);
  EXPECT_FALSE(fs::exists(csv.string() + ".partial"));

  // Interrupted run: keep the header and the first four rows.
  std::istringstream in(full);
  std::string line, kept;
  for (int k = 0; k < 5 && std::getline(in, line); ++k) kept += line + "\n";
  io::write_text(csv, kept);
  ASSERT_EQ(run("sweep", j), cli::exit_ok);
  EXPECT_NE(log_.str().find("4 reused"), std::string::npos) << log_.str();
  EXPECT_EQ(slurp(csv), full);
}

TEST_F(CliTest, SweepIsolatesFailedRows) {
  json j = config("headline_500ns.json");
  j["pulse"]["gate_time_ns"] = 100;
  j["model"] = {{"levels", 2}};
  j["sweep"] = {{"axes", {{{"path", "effective.qubit_frequencies_ghz.0"}, {"values", {4.984, 5.3}}}}}};
  j["effective"]["qubit_frequencies_ghz"][2] = 5.3;
  j["effective"]["couplings_mhz"] = {{"g12", 20.0}, {"g23", 20.0}, {"g13", 0.0}};
  ASSERT_EQ(run("sweep", j), cli::exit_ok) << log_.str();
  const std::string csv = slurp(dir_ / "out" / "sweep.csv");
  EXPECT_NE(csv.find("0,4.984,ok,"), std::string::npos) << csv;
  EXPECT_NE(csv.find("1,5.3,failed,"), std::string::npos) << csv;
}

TEST_F(CliTest, CalibrateWritesTraceAndConfig) {
  json j = config("two_level_500ns.json");
  j["calibration"] = {{"free", {"drive_frequency"}}, {"bounds", {{"drive_frequency", {-1.0, 1.0}}}}, {"budget", 30}};
  j["pulse"]["drive_frequency_ghz"] = 5.2902;
  ASSERT_EQ(run("calibrate", j), cli::exit_ok) << log_.str();
  const json c = load(dir_ / "out" / "calibration.json");
  EXPECT_LE(c["evaluations"].get<std::size_t>(), 30u);
  const std::string trace = slurp(dir_ / "out" / "calibration_trace.csv");
  EXPECT_EQ(first_line(trace), "evaluation,infidelity,best_infidelity");
  EXPECT_EQ(line_count(trace), 1 + c["evaluations"].get<std::size_t>());
  const RunConfig calibrated = parse_config(load(dir_ / "out" / "calibrated_config.json"));
  EXPECT_NEAR(*calibrated.pulse.drive_frequency_ghz, c["best_pulse"]["drive_frequency_ghz"].get<double>(), 1e-12);
  EXPECT_GE(c["process_fidelity"].get<double>(), 0.9);
}

// ---------------------------------------------------------------- executable

#ifdef ITOFFOLI_CLI_PATH
TEST_F(CliTest, ExecutableExitCodes) {
  auto code = [](const std::string& args) {
    const int status = std::system((std::string(ITOFFOLI_CLI_PATH) + " " + args + " 2>/dev/null").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  fs::create_directories(dir_);
  const std::string cfg = fixtures::config_path("reference_bare.json").string();
  EXPECT_EQ(code("derive --config " + cfg + " --out " + (dir_ / "ok").string()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "ok" / "derive.json"));
  EXPECT_EQ(code("derive"), 2);
  EXPECT_EQ(code("derive --config " + (dir_ / "missing.json").string()), 2);
  EXPECT_EQ(code("launch --config " + cfg), 2);
  EXPECT_EQ(code("shifts --config " + cfg + " --jobs many"), 2);
  io::write_text(dir_ / "broken.json", "{ not json");
  EXPECT_EQ(code("derive --config " + (dir_ / "broken.json").string()), 2);
}
#endif
