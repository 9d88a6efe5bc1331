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

#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "itoffoli/calibration.hpp"
#include "itoffoli/circuit_model.hpp"
#include "itoffoli/effective_model.hpp"
#include "itoffoli/errors.hpp"
#include "itoffoli/simulation.hpp"
#include "itoffoli/units.hpp"

namespace itoffoli {

using json = nlohmann::ordered_json;

enum class InputMode { circuit, bare, effective };

// Values are kept in config units (GHz, MHz, ns, fF) so that emitting and
// re-reading a config is lossless.
struct EffectiveBlock {
  std::array<double, 3> qubit_frequencies_ghz{};
  std::array<double, 3> anharmonicities_mhz{};
  double g12_mhz = 0.0, g23_mhz = 0.0, g13_mhz = 0.0;
};

struct BareBlock {
  std::array<double, 3> qubit_frequencies_ghz{};
  std::array<double, 3> qubit_anharmonicities_mhz{};
  std::array<double, 2> coupler_frequencies_ghz{};
  std::array<double, 2> coupler_anharmonicities_mhz{};
  double g12_mhz = 0.0, g23_mhz = 0.0, g13_mhz = 0.0;
  double g1c1_mhz = 0.0, g2c1_mhz = 0.0, g2c2_mhz = 0.0, g3c2_mhz = 0.0;
};

struct CircuitBlock {
  std::array<double, 3> qubit_capacitances_ff{};
  std::array<double, 2> coupler_capacitances_ff{};
  double c12_ff = 0.0, c23_ff = 0.0, c1c1_ff = 0.0, c2c1_ff = 0.0, c2c2_ff = 0.0, c3c2_ff = 0.0;
  std::array<double, 3> qubit_josephson_ghz{};
  std::array<double, 2> coupler_josephson_ghz{};
  std::array<double, 2> coupler_flux{};
  CapacitanceMethod reduction = CapacitanceMethod::closed_form;
};

struct ModelBlock {
  ModelKind kind = ModelKind::effective_3mode;
  int levels = 3;
  CouplingForm coupling_form = CouplingForm::rotating_wave;
  Dressing dressing = Dressing::full_weight;
  double qubit_coupling_sign = -1.0;
  double coupler_coupling_sign = -1.0;
  std::optional<std::array<double, 3>> anharmonicity_override_mhz;
  std::optional<std::array<double, 2>> two_level_shifts_mhz;  // chi12, chi23
};

struct PulseBlock {
  Envelope envelope = Envelope::gaussian;
  double peak_amplitude_mhz = 1.5;
  double gate_time_ns = 500.0;
  std::optional<double> sigma_ns;             // default gate_time / 6
  std::optional<double> drag_beta_ns;         // default -1/alpha_2
  std::optional<double> drive_frequency_ghz;  // default |101> -> |111> transition
  double phase_rad = 0.0;
  double flat_top_ns = 0.0;
};

struct PropagationBlock {
  Frame frame = Frame::rotating;
  Integrator integrator = Integrator::magnus4;
  double rtol = 1e-9;
  double atol = 1e-9;
  double max_step_ns = 0.0;
  std::size_t max_steps = 2'000'000;
  Basis basis = Basis::dressed;
  std::size_t samples = 201;
};

struct CorrectionBlock {
  CorrectionSource source = CorrectionSource::idle_reference;
  CorrectionScope scope = CorrectionScope::full_idle;
  double idle_offdiag_tol = 1e-3;
};

// Bounds: drive_frequency as MHz offsets from the start value, sigma and
// drag_beta in ns, peak_amplitude in MHz, phase in rad.
struct CalibrationBlock {
  std::vector<std::string> free{"drive_frequency", "sigma", "drag_beta"};
  std::map<std::string, std::array<double, 2>> bounds;
  std::size_t budget = 300;
  std::size_t restarts = 4;
  double step = 0.3;
  double target_fidelity = 0.999;
};

struct SweepBlock {
  std::vector<SweepAxis> axes;
};

struct RunConfig {
  InputMode input_mode = InputMode::effective;
  std::optional<EffectiveBlock> effective;
  std::optional<BareBlock> bare;
  std::optional<CircuitBlock> circuit;
  ModelBlock model;
  PulseBlock pulse;
  PropagationBlock propagation;
  CorrectionBlock correction;
  CalibrationBlock calibration;
  SweepBlock sweep;
  std::string method = "all";
  std::string output_dir = "out";
  unsigned long seed = 0;
};

namespace detail {

template <typename E>
struct EnumNames;

#define ITOFFOLI_ENUM_NAMES(Type, ...)                                               \
  template <>                                                                        \
  struct EnumNames<Type> {                                                           \
    static const std::vector<std::pair<Type, std::string>>& get() {                  \
      static const std::vector<std::pair<Type, std::string>> names{__VA_ARGS__};     \
      return names;                                                                  \
    }                                                                                \
  };

ITOFFOLI_ENUM_NAMES(InputMode, {InputMode::circuit, "circuit"}, {InputMode::bare, "bare"},
                    {InputMode::effective, "effective"})
ITOFFOLI_ENUM_NAMES(ModelKind, {ModelKind::effective_3mode, "effective_3mode"},
                    {ModelKind::full_5mode, "full_5mode"}, {ModelKind::two_level, "two_level"})
ITOFFOLI_ENUM_NAMES(CouplingForm, {CouplingForm::rotating_wave, "rotating_wave"}, {CouplingForm::charge, "charge"})
ITOFFOLI_ENUM_NAMES(Dressing, {Dressing::full_weight, "full_weight"},
                    {Dressing::schrieffer_wolff, "schrieffer_wolff"})
ITOFFOLI_ENUM_NAMES(CapacitanceMethod, {CapacitanceMethod::closed_form, "closed_form"},
                    {CapacitanceMethod::exact_inverse, "exact_inverse"})
ITOFFOLI_ENUM_NAMES(Envelope, {Envelope::gaussian, "gaussian"}, {Envelope::flat_top_gaussian, "flat_top_gaussian"})
ITOFFOLI_ENUM_NAMES(Frame, {Frame::rotating, "rotating"}, {Frame::lab, "lab"})
ITOFFOLI_ENUM_NAMES(Integrator, {Integrator::magnus4, "magnus4"}, {Integrator::dopri5, "dopri5"})
ITOFFOLI_ENUM_NAMES(Basis, {Basis::dressed, "dressed"}, {Basis::bare, "bare"})
ITOFFOLI_ENUM_NAMES(CorrectionSource, {CorrectionSource::idle_reference, "idle_reference"},
                    {CorrectionSource::analytic, "analytic"})
ITOFFOLI_ENUM_NAMES(CorrectionScope, {CorrectionScope::full_idle, "full_idle"},
                    {CorrectionScope::two_body, "two_body"})

#undef ITOFFOLI_ENUM_NAMES

}  // namespace detail

template <typename E>
std::string to_string(E value) {
  for (const auto& [v, name] : detail::EnumNames<E>::get())
    if (v == value) return name;
  throw ConfigError("unnamed enum value");
}

template <typename E>
E enum_from_string(const std::string& s, const std::string& path) {
  std::string allowed;
  for (const auto& [v, name] : detail::EnumNames<E>::get()) {
    if (name == s) return v;
    allowed += (allowed.empty() ? "" : ", ") + name;
  }
  throw ConfigError(path + ": unknown value '" + s + "' (expected one of " + allowed + ")");
}

namespace detail {

// Walks one JSON object, reporting every problem with its dotted path and
// rejecting unknown keys.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + "expected an object");
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError(child(key) + ": missing required field");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(child(key) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(child(key) + ": must be finite");
    return x;
  }
  double number(const std::string& key, double fallback) {
    seen_.insert(key);
    return has(key) ? number(key) : fallback;
  }
  std::optional<double> optional_number(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return std::nullopt;
    return number(key);
  }
  double positive(const std::string& key, double fallback) {
    const double x = number(key, fallback);
    if (!(x > 0.0)) throw ConfigError(child(key) + ": must be > 0");
    return x;
  }
  std::size_t count(const std::string& key, std::size_t fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(child(key) + ": expected a non-negative integer");
    return v.get<std::size_t>();
  }
  std::string text(const std::string& key, const std::string& fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(child(key) + ": expected a string");
    return v.get<std::string>();
  }
  template <typename E>
  E choice(const std::string& key, E fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    return enum_from_string<E>(text(key, ""), child(key));
  }
  template <std::size_t N>
  std::array<double, N> numbers(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array() || v.size() != N)
      throw ConfigError(child(key) + ": expected an array of " + std::to_string(N) + " numbers");
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
      if (!v[i].is_number()) throw ConfigError(child(key) + "." + std::to_string(i) + ": expected a number");
      out[i] = v[i].get<double>();
    }
    return out;
  }
  Reader object(const std::string& key) { return Reader(raw(key), child(key)); }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw ConfigError(child(key) + ": unknown field");
  }

 private:
  std::string where() const { return path_.empty() ? "" : path_ + ": "; }
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline void check_positive(double v, const std::string& path) {
  if (!(v > 0.0)) throw ConfigError(path + ": must be > 0");
}

}  // namespace detail

inline const std::vector<std::string>& pulse_field_names() {
  static const std::vector<std::string> names{"peak_amplitude", "drive_frequency", "sigma", "drag_beta", "phase"};
  return names;
}

inline RunConfig parse_config(const json& j) {
  detail::Reader top(j, "");
  RunConfig c;
  int blocks = 0;
  for (const char* key : {"effective", "bare", "circuit"}) blocks += top.has(key) ? 1 : 0;
  if (blocks != 1) throw ConfigError("exactly one of effective, bare, circuit must be present (found " + std::to_string(blocks) + ")");

  if (top.has("effective")) {
    c.input_mode = InputMode::effective;
    auto r = top.object("effective");
    EffectiveBlock b;
    b.qubit_frequencies_ghz = r.numbers<3>("qubit_frequencies_ghz");
    b.anharmonicities_mhz = r.numbers<3>("anharmonicities_mhz");
    auto g = r.object("couplings_mhz");
    b.g12_mhz = g.number("g12");
    b.g23_mhz = g.number("g23");
    b.g13_mhz = g.number("g13");
    g.finish();
    r.finish();
    for (int i = 0; i < 3; ++i) detail::check_positive(b.qubit_frequencies_ghz[i], "effective.qubit_frequencies_ghz." + std::to_string(i));
    c.effective = b;
  } else if (top.has("bare")) {
    c.input_mode = InputMode::bare;
    auto r = top.object("bare");
    BareBlock b;
    b.qubit_frequencies_ghz = r.numbers<3>("qubit_frequencies_ghz");
    b.qubit_anharmonicities_mhz = r.numbers<3>("qubit_anharmonicities_mhz");
    b.coupler_frequencies_ghz = r.numbers<2>("coupler_frequencies_ghz");
    b.coupler_anharmonicities_mhz = r.numbers<2>("coupler_anharmonicities_mhz");
    auto q = r.object("qubit_couplings_mhz");
    b.g12_mhz = q.number("g12");
    b.g23_mhz = q.number("g23");
    b.g13_mhz = q.number("g13");
    q.finish();
    auto k = r.object("coupler_couplings_mhz");
    b.g1c1_mhz = k.number("g1c1");
    b.g2c1_mhz = k.number("g2c1");
    b.g2c2_mhz = k.number("g2c2");
    b.g3c2_mhz = k.number("g3c2");
    k.finish();
    r.finish();
    for (int i = 0; i < 3; ++i) detail::check_positive(b.qubit_frequencies_ghz[i], "bare.qubit_frequencies_ghz." + std::to_string(i));
    for (int i = 0; i < 2; ++i) detail::check_positive(b.coupler_frequencies_ghz[i], "bare.coupler_frequencies_ghz." + std::to_string(i));
    c.bare = b;
  } else {
    c.input_mode = InputMode::circuit;
    auto r = top.object("circuit");
    CircuitBlock b;
    b.qubit_capacitances_ff = r.numbers<3>("qubit_capacitances_ff");
    b.coupler_capacitances_ff = r.numbers<2>("coupler_capacitances_ff");
    auto k = r.object("coupling_capacitances_ff");
    b.c12_ff = k.number("c12");
    b.c23_ff = k.number("c23");
    b.c1c1_ff = k.number("c1c1");
    b.c2c1_ff = k.number("c2c1");
    b.c2c2_ff = k.number("c2c2");
    b.c3c2_ff = k.number("c3c2");
    k.finish();
    b.qubit_josephson_ghz = r.numbers<3>("qubit_josephson_ghz");
    b.coupler_josephson_ghz = r.numbers<2>("coupler_josephson_ghz");
    b.coupler_flux = r.numbers<2>("coupler_flux");
    b.reduction = r.choice("reduction", CapacitanceMethod::closed_form);
    r.finish();
    for (int i = 0; i < 3; ++i) detail::check_positive(b.qubit_capacitances_ff[i], "circuit.qubit_capacitances_ff." + std::to_string(i));
    for (int i = 0; i < 2; ++i) detail::check_positive(b.coupler_capacitances_ff[i], "circuit.coupler_capacitances_ff." + std::to_string(i));
    c.circuit = b;
  }
  if (top.has("input_mode")) {
    const auto declared = top.choice("input_mode", c.input_mode);
    if (declared != c.input_mode)
      throw ConfigError("input_mode: '" + to_string(declared) + "' does not match the parameter block present");
  } else {
    top.text("input_mode", "");
  }

  if (top.has("model")) {
    auto r = top.object("model");
    auto& m = c.model;
    m.kind = r.choice("kind", m.kind);
    m.levels = static_cast<int>(r.count("levels", static_cast<std::size_t>(m.levels)));
    m.coupling_form = r.choice("coupling_form", m.coupling_form);
    m.dressing = r.choice("dressing", m.dressing);
    m.qubit_coupling_sign = r.number("qubit_coupling_sign", m.qubit_coupling_sign);
    m.coupler_coupling_sign = r.number("coupler_coupling_sign", m.coupler_coupling_sign);
    if (r.has("anharmonicity_override_mhz")) m.anharmonicity_override_mhz = r.numbers<3>("anharmonicity_override_mhz");
    else r.text("anharmonicity_override_mhz", "");
    if (r.has("two_level_shifts_mhz")) {
      auto s = r.object("two_level_shifts_mhz");
      m.two_level_shifts_mhz = std::array<double, 2>{s.number("chi12"), s.number("chi23")};
      s.finish();
    } else {
      r.text("two_level_shifts_mhz", "");
    }
    r.finish();
    if (m.levels < 2 || m.levels > 5) throw ConfigError("model.levels: must be between 2 and 5");
    for (const auto& [v, name] : {std::pair{m.qubit_coupling_sign, "qubit_coupling_sign"}, {m.coupler_coupling_sign, "coupler_coupling_sign"}})
      if (v != 1.0 && v != -1.0) throw ConfigError(std::string("model.") + name + ": must be +1 or -1");
  }
  if (c.model.kind == ModelKind::full_5mode && c.input_mode == InputMode::effective)
    throw ConfigError("model.kind: full_5mode needs a bare or circuit parameter block");

  if (top.has("pulse")) {
    auto r = top.object("pulse");
    auto& p = c.pulse;
    p.envelope = r.choice("envelope", p.envelope);
    p.peak_amplitude_mhz = r.number("peak_amplitude_mhz", p.peak_amplitude_mhz);
    p.gate_time_ns = r.positive("gate_time_ns", p.gate_time_ns);
    p.sigma_ns = r.optional_number("sigma_ns");
    p.drag_beta_ns = r.optional_number("drag_beta_ns");
    p.drive_frequency_ghz = r.optional_number("drive_frequency_ghz");
    p.phase_rad = r.number("phase_rad", p.phase_rad);
    p.flat_top_ns = r.number("flat_top_ns", p.flat_top_ns);
    r.finish();
    if (p.sigma_ns && !(*p.sigma_ns > 0.0)) throw ConfigError("pulse.sigma_ns: must be > 0");
    if (p.flat_top_ns < 0.0 || p.flat_top_ns >= p.gate_time_ns) throw ConfigError("pulse.flat_top_ns: must lie in [0, gate_time_ns)");
  }

  if (top.has("propagation")) {
    auto r = top.object("propagation");
    auto& p = c.propagation;
    p.frame = r.choice("frame", p.frame);
    p.integrator = r.choice("integrator", p.integrator);
    p.rtol = r.positive("rtol", p.rtol);
    p.atol = r.positive("atol", p.atol);
    p.max_step_ns = r.number("max_step_ns", p.max_step_ns);
    p.max_steps = r.count("max_steps", p.max_steps);
    p.basis = r.choice("basis", p.basis);
    p.samples = r.count("samples", p.samples);
    r.finish();
    if (p.max_step_ns < 0.0) throw ConfigError("propagation.max_step_ns: must be >= 0");
    if (p.samples < 2) throw ConfigError("propagation.samples: must be >= 2");
  }
  if (c.model.coupling_form == CouplingForm::charge && c.propagation.frame == Frame::rotating &&
      c.model.kind == ModelKind::effective_3mode)
    throw ConfigError("model.coupling_form: charge form needs propagation.frame = lab");

  if (top.has("correction")) {
    auto r = top.object("correction");
    auto& k = c.correction;
    k.source = r.choice("source", k.source);
    k.scope = r.choice("scope", k.scope);
    k.idle_offdiag_tol = r.positive("idle_offdiag_tol", k.idle_offdiag_tol);
    r.finish();
  }

  if (top.has("calibration")) {
    auto r = top.object("calibration");
    auto& k = c.calibration;
    if (r.has("free")) {
      const json& f = r.raw("free");
      if (!f.is_array() || f.empty()) throw ConfigError("calibration.free: expected a non-empty array of names");
      k.free.clear();
      for (const auto& v : f) {
        if (!v.is_string()) throw ConfigError("calibration.free: expected strings");
        const auto name = v.get<std::string>();
        const auto& names = pulse_field_names();
        if (std::find(names.begin(), names.end(), name) == names.end())
          throw ConfigError("calibration.free: unknown parameter '" + name + "'");
        k.free.push_back(name);
      }
    } else {
      r.text("free", "");
    }
    if (r.has("bounds")) {
      auto b = r.object("bounds");
      for (const auto& name : pulse_field_names())
        if (b.has(name)) {
          const auto v = b.numbers<2>(name);
          if (!(v[0] < v[1])) throw ConfigError(b.child(name) + ": lower bound must be < upper bound");
          k.bounds[name] = v;
        }
      b.finish();
    } else {
      r.text("bounds", "");
    }
    k.budget = r.count("budget", k.budget);
    k.restarts = r.count("restarts", k.restarts);
    k.step = r.positive("step", k.step);
    k.target_fidelity = r.number("target_fidelity", k.target_fidelity);
    r.finish();
    if (k.budget < 2) throw ConfigError("calibration.budget: must be >= 2");
  }

  if (top.has("sweep")) {
    auto r = top.object("sweep");
    const json& axes = r.raw("axes");
    if (!axes.is_array()) throw ConfigError("sweep.axes: expected an array");
    for (std::size_t i = 0; i < axes.size(); ++i) {
      detail::Reader a(axes[i], "sweep.axes." + std::to_string(i));
      SweepAxis axis;
      axis.name = a.text("path", "");
      if (axis.name.empty()) throw ConfigError(a.child("path") + ": missing required field");
      const json& values = a.raw("values");
      if (!values.is_array() || values.empty()) throw ConfigError(a.child("values") + ": expected a non-empty array");
      for (const auto& v : values) {
        if (!v.is_number()) throw ConfigError(a.child("values") + ": expected numbers");
        axis.values.push_back(v.get<double>());
      }
      a.finish();
      c.sweep.axes.push_back(axis);
    }
    r.finish();
  }

  c.method = top.text("method", c.method);
  if (c.method != "pt2" && c.method != "pt3" && c.method != "exact" && c.method != "all")
    throw ConfigError("method: expected one of pt2, pt3, exact, all");
  c.output_dir = top.text("output_dir", c.output_dir);
  c.seed = top.count("seed", c.seed);
  top.finish();
  return c;
}

namespace detail {

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace detail

inline json to_json(const RunConfig& c) {
  json j;
  j["input_mode"] = to_string(c.input_mode);
  if (c.effective) {
    const auto& b = *c.effective;
    j["effective"] = {{"qubit_frequencies_ghz", b.qubit_frequencies_ghz},
                      {"anharmonicities_mhz", b.anharmonicities_mhz},
                      {"couplings_mhz", {{"g12", b.g12_mhz}, {"g23", b.g23_mhz}, {"g13", b.g13_mhz}}}};
  }
  if (c.bare) {
    const auto& b = *c.bare;
    j["bare"] = {{"qubit_frequencies_ghz", b.qubit_frequencies_ghz},
                 {"qubit_anharmonicities_mhz", b.qubit_anharmonicities_mhz},
                 {"coupler_frequencies_ghz", b.coupler_frequencies_ghz},
                 {"coupler_anharmonicities_mhz", b.coupler_anharmonicities_mhz},
                 {"qubit_couplings_mhz", {{"g12", b.g12_mhz}, {"g23", b.g23_mhz}, {"g13", b.g13_mhz}}},
                 {"coupler_couplings_mhz",
                  {{"g1c1", b.g1c1_mhz}, {"g2c1", b.g2c1_mhz}, {"g2c2", b.g2c2_mhz}, {"g3c2", b.g3c2_mhz}}}};
  }
  if (c.circuit) {
    const auto& b = *c.circuit;
    j["circuit"] = {{"qubit_capacitances_ff", b.qubit_capacitances_ff},
                    {"coupler_capacitances_ff", b.coupler_capacitances_ff},
                    {"coupling_capacitances_ff",
                     {{"c12", b.c12_ff}, {"c23", b.c23_ff}, {"c1c1", b.c1c1_ff}, {"c2c1", b.c2c1_ff},
                      {"c2c2", b.c2c2_ff}, {"c3c2", b.c3c2_ff}}},
                    {"qubit_josephson_ghz", b.qubit_josephson_ghz},
                    {"coupler_josephson_ghz", b.coupler_josephson_ghz},
                    {"coupler_flux", b.coupler_flux},
                    {"reduction", to_string(b.reduction)}};
  }
  const auto& m = c.model;
  j["model"] = {{"kind", to_string(m.kind)},
                {"levels", m.levels},
                {"coupling_form", to_string(m.coupling_form)},
                {"dressing", to_string(m.dressing)},
                {"qubit_coupling_sign", m.qubit_coupling_sign},
                {"coupler_coupling_sign", m.coupler_coupling_sign},
                {"anharmonicity_override_mhz", detail::optional_json(m.anharmonicity_override_mhz)},
                {"two_level_shifts_mhz", m.two_level_shifts_mhz
                                             ? json{{"chi12", (*m.two_level_shifts_mhz)[0]},
                                                    {"chi23", (*m.two_level_shifts_mhz)[1]}}
                                             : json(nullptr)}};
  const auto& p = c.pulse;
  j["pulse"] = {{"envelope", to_string(p.envelope)},
                {"peak_amplitude_mhz", p.peak_amplitude_mhz},
                {"gate_time_ns", p.gate_time_ns},
                {"sigma_ns", detail::optional_json(p.sigma_ns)},
                {"drag_beta_ns", detail::optional_json(p.drag_beta_ns)},
                {"drive_frequency_ghz", detail::optional_json(p.drive_frequency_ghz)},
                {"phase_rad", p.phase_rad},
                {"flat_top_ns", p.flat_top_ns}};
  const auto& g = c.propagation;
  j["propagation"] = {{"frame", to_string(g.frame)},   {"integrator", to_string(g.integrator)},
                      {"rtol", g.rtol},                 {"atol", g.atol},
                      {"max_step_ns", g.max_step_ns},   {"max_steps", g.max_steps},
                      {"basis", to_string(g.basis)},    {"samples", g.samples}};
  j["correction"] = {{"source", to_string(c.correction.source)},
                     {"scope", to_string(c.correction.scope)},
                     {"idle_offdiag_tol", c.correction.idle_offdiag_tol}};
  json bounds = json::object();
  for (const auto& [name, b] : c.calibration.bounds) bounds[name] = b;
  j["calibration"] = {{"free", c.calibration.free},       {"bounds", bounds},
                      {"budget", c.calibration.budget},   {"restarts", c.calibration.restarts},
                      {"step", c.calibration.step},       {"target_fidelity", c.calibration.target_fidelity}};
  json axes = json::array();
  for (const auto& a : c.sweep.axes) axes.push_back({{"path", a.name}, {"values", a.values}});
  j["sweep"] = {{"axes", axes}};
  j["method"] = c.method;
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  return j;
}

// Sets a dotted path ("pulse.peak_amplitude_mhz", "effective.qubit_frequencies_ghz.1")
// inside a raw config document.
inline void set_path(json& j, const std::string& path, double value) {
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    json* next = nullptr;
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(key);
      } catch (const std::exception&) {
        throw ConfigError(path + ": '" + key + "' is not an array index");
      }
      if (idx >= node->size()) throw ConfigError(path + ": index out of range");
      next = &(*node)[idx];
    } else if (node->is_object()) {
      if (dot != std::string::npos && !node->contains(key)) throw ConfigError(path + ": no field '" + key + "'");
      next = &(*node)[key];
    } else {
      throw ConfigError(path + ": cannot descend into a scalar");
    }
    if (dot == std::string::npos) {
      *next = value;
      return;
    }
    node = next;
    start = dot + 1;
  }
}

// Model and simulation settings derived from a config.
struct ResolvedModel {
  std::optional<BareParams> bare;
  std::optional<ResidualCouplings> residual;
  EffectiveParams effective;
  ModelSpec spec;
};

inline BareParams bare_from_block(const BareBlock& b) {
  BareParams p;
  for (int i = 0; i < 3; ++i) {
    p.qubit_frequency[i] = units::ghz(b.qubit_frequencies_ghz[i]);
    p.qubit_anharmonicity[i] = units::mhz(b.qubit_anharmonicities_mhz[i]);
  }
  for (int i = 0; i < 2; ++i) {
    p.coupler_frequency[i] = units::ghz(b.coupler_frequencies_ghz[i]);
    p.coupler_anharmonicity[i] = units::mhz(b.coupler_anharmonicities_mhz[i]);
  }
  p.g12 = units::mhz(b.g12_mhz);
  p.g23 = units::mhz(b.g23_mhz);
  p.g13 = units::mhz(b.g13_mhz);
  p.g1c1 = units::mhz(b.g1c1_mhz);
  p.g2c1 = units::mhz(b.g2c1_mhz);
  p.g2c2 = units::mhz(b.g2c2_mhz);
  p.g3c2 = units::mhz(b.g3c2_mhz);
  return p;
}

inline CircuitSpec circuit_from_block(const CircuitBlock& b) {
  CircuitSpec s;
  for (int i = 0; i < 3; ++i) s.qubit_capacitance[i] = b.qubit_capacitances_ff[i] * units::femto;
  for (int i = 0; i < 2; ++i) s.coupler_capacitance[i] = b.coupler_capacitances_ff[i] * units::femto;
  s.c_12 = b.c12_ff * units::femto;
  s.c_23 = b.c23_ff * units::femto;
  s.c_1c1 = b.c1c1_ff * units::femto;
  s.c_2c1 = b.c2c1_ff * units::femto;
  s.c_2c2 = b.c2c2_ff * units::femto;
  s.c_3c2 = b.c3c2_ff * units::femto;
  s.qubit_ej = b.qubit_josephson_ghz;
  s.coupler_ej = b.coupler_josephson_ghz;
  s.coupler_flux = b.coupler_flux;
  return s;
}

inline EffectiveParams effective_from_block(const EffectiveBlock& b) {
  EffectiveParams e;
  for (int i = 0; i < 3; ++i) {
    e.frequency[i] = units::ghz(b.qubit_frequencies_ghz[i]);
    e.anharmonicity[i] = units::mhz(b.anharmonicities_mhz[i]);
  }
  e.g12 = units::mhz(b.g12_mhz);
  e.g23 = units::mhz(b.g23_mhz);
  e.g13 = units::mhz(b.g13_mhz);
  return e;
}

inline ResolvedModel resolve_model(const RunConfig& c) {
  ResolvedModel r;
  if (c.circuit) {
    const CircuitSpec s = circuit_from_block(*c.circuit);
    r.bare = quantize(reduce_capacitance_network(s, c.circuit->reduction), s);
  } else if (c.bare) {
    r.bare = bare_from_block(*c.bare);
  }
  if (r.bare) {
    r.effective = dress_parameters(*r.bare, {c.model.dressing, c.model.qubit_coupling_sign});
    r.residual = residual_couplings(*r.bare);
  } else {
    r.effective = effective_from_block(*c.effective);
  }
  if (c.model.anharmonicity_override_mhz)
    for (int i = 0; i < 3; ++i) r.effective.anharmonicity[i] = units::mhz((*c.model.anharmonicity_override_mhz)[i]);

  auto& m = r.spec;
  m.kind = c.model.kind;
  m.levels = c.model.levels;
  m.frame = c.propagation.frame;
  m.coupling = c.model.coupling_form;
  m.full.qubit_coupling_sign = c.model.qubit_coupling_sign;
  m.full.coupler_coupling_sign = c.model.coupler_coupling_sign;
  m.effective = r.effective;
  if (r.bare) m.bare = *r.bare;
  if (m.kind == ModelKind::two_level) {
    if (c.model.two_level_shifts_mhz) {
      m.chi12 = units::mhz((*c.model.two_level_shifts_mhz)[0]);
      m.chi23 = units::mhz((*c.model.two_level_shifts_mhz)[1]);
    } else {
      const auto h = build_effective_hamiltonian(r.effective, ModeLayout::uniform(3, c.model.levels));
      const ExactShifts x = dispersive_shifts_exact(labeled_spectrum(h.static_part, h.layout));
      m.chi12 = x.chi12;
      m.chi23 = x.chi23;
    }
  }
  return r;
}

inline GateOptions gate_options(const RunConfig& c) {
  GateOptions o;
  o.basis = c.propagation.basis;
  o.source = c.correction.source;
  o.scope = c.correction.scope;
  o.idle_offdiag_tol = c.correction.idle_offdiag_tol;
  o.propagation.integrator = c.propagation.integrator;
  o.propagation.rtol = c.propagation.rtol;
  o.propagation.atol = c.propagation.atol;
  o.propagation.max_step = c.propagation.max_step_ns;
  o.propagation.max_steps = c.propagation.max_steps;
  return o;
}

// Pulse with every unset field filled from the simulator defaults.
inline DriveSignal resolve_pulse(const RunConfig& c, const GateSimulator& sim) {
  DriveSignal s = sim.default_drive(units::mhz(c.pulse.peak_amplitude_mhz));
  s.envelope = c.pulse.envelope;
  s.flat_top = c.pulse.flat_top_ns;
  s.phase = c.pulse.phase_rad;
  if (c.pulse.sigma_ns) s.sigma = *c.pulse.sigma_ns;
  if (c.pulse.drag_beta_ns) s.drag_beta = *c.pulse.drag_beta_ns;
  if (c.pulse.drive_frequency_ghz) s.frequency = units::ghz(*c.pulse.drive_frequency_ghz);
  return s;
}

inline void store_pulse(RunConfig& c, const DriveSignal& s) {
  c.pulse.envelope = s.envelope;
  c.pulse.peak_amplitude_mhz = units::to_mhz(s.peak_amplitude);
  c.pulse.gate_time_ns = s.gate_time;
  c.pulse.sigma_ns = s.sigma;
  c.pulse.drag_beta_ns = s.drag_beta;
  c.pulse.drive_frequency_ghz = units::to_ghz(s.frequency);
  c.pulse.phase_rad = s.phase;
  c.pulse.flat_top_ns = s.flat_top;
}

inline PulseField pulse_field_from_name(const std::string& name) {
  if (name == "peak_amplitude") return PulseField::peak_amplitude;
  if (name == "drive_frequency") return PulseField::frequency;
  if (name == "sigma") return PulseField::sigma;
  if (name == "drag_beta") return PulseField::drag_beta;
  if (name == "phase") return PulseField::phase;
  throw ConfigError("calibration.free: unknown parameter '" + name + "'");
}

// Free parameters with bounds converted to internal units around `start`.
inline std::vector<FreeParameter> free_parameters(const CalibrationBlock& k, const DriveSignal& start) {
  std::vector<FreeParameter> out;
  for (const auto& name : k.free) {
    const auto it = k.bounds.find(name);
    const PulseField f = pulse_field_from_name(name);
    Bounds b;
    switch (f) {
      case PulseField::frequency: {
        const auto r = it != k.bounds.end() ? it->second : std::array<double, 2>{-2.0, 2.0};
        b = {start.frequency + units::mhz(r[0]), start.frequency + units::mhz(r[1])};
        break;
      }
      case PulseField::peak_amplitude: {
        const auto r = it != k.bounds.end() ? it->second : std::array<double, 2>{0.1, 10.0};
        b = {units::mhz(r[0]), units::mhz(r[1])};
        break;
      }
      case PulseField::sigma: {
        const auto r = it != k.bounds.end() ? it->second : std::array<double, 2>{start.gate_time / 10.0, 2.0 * start.gate_time};
        b = {r[0], r[1]};
        break;
      }
      case PulseField::drag_beta: {
        const auto r = it != k.bounds.end() ? it->second : std::array<double, 2>{-20.0, 20.0};
        b = {r[0], r[1]};
        break;
      }
      case PulseField::phase: {
        const auto r = it != k.bounds.end() ? it->second : std::array<double, 2>{-std::numbers::pi, std::numbers::pi};
        b = {r[0], r[1]};
        break;
      }
    }
    DriveSignal s = start;
    const double x = pulse_field(s, f);
    if (x < b.lower || x > b.upper)
      throw ConfigError("calibration.bounds." + name + ": start value lies outside the bounds");
    out.push_back({f, b});
  }
  return out;
}

}  // namespace itoffoli
