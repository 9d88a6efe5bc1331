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
#include <string>
#include <vector>

#include "itoffoli/circuit_model.hpp"
#include "itoffoli/hamiltonian.hpp"
#include "itoffoli/pulses.hpp"
#include "itoffoli/units.hpp"

namespace itoffoli {

// Qubit-only parameters, angular frequencies in rad/ns. Qubit indices are 0-based.
struct EffectiveParams {
  std::array<double, 3> frequency{};
  std::array<double, 3> anharmonicity{};
  double g12 = 0.0, g23 = 0.0, g13 = 0.0;
  bool dispersive = true;
  double max_coupler_ratio = 0.0;  // max |g_kc / Delta_kc|

  double delta(int i, int j) const { return frequency[i] - frequency[j]; }
  double sum(int i, int j) const { return frequency[i] + frequency[j]; }
  double coupling(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i == 0 && j == 1) return g12;
    if (i == 1 && j == 2) return g23;
    if (i == 0 && j == 2) return g13;
    throw ConfigError("no coupling between qubits " + std::to_string(i) + " and " + std::to_string(j));
  }
};

struct ResidualCouplings {
  double g1c1 = 0.0, g2c1 = 0.0, g2c2 = 0.0, g3c2 = 0.0;
  std::vector<std::string> warnings;
};

enum class Dressing {
  full_weight,       // mediated coupling g_a g_b (1/D_a + 1/D_b)
  schrieffer_wolff,  // (g_a g_b / 2)(1/D_a + 1/D_b), signs matched to the full model
};

struct DressingOptions {
  Dressing mode = Dressing::full_weight;
  double qubit_coupling_sign = -1.0;  // sign used by build_full_hamiltonian
};

namespace detail {

inline double detuning(double wq, double wc, const std::string& name) {
  const double d = wq - wc;
  if (d == 0.0) throw ConfigError("zero qubit-coupler detuning " + name);
  return d;
}

}  // namespace detail

// Anharmonicities pass through unchanged.
inline EffectiveParams dress_parameters(const BareParams& b, const DressingOptions& options = {}) {
  const auto& w = b.qubit_frequency;
  const auto& wc = b.coupler_frequency;
  const double d1c1 = detail::detuning(w[0], wc[0], "1,c1");
  const double d2c1 = detail::detuning(w[1], wc[0], "2,c1");
  const double d2c2 = detail::detuning(w[1], wc[1], "2,c2");
  const double d3c2 = detail::detuning(w[2], wc[1], "3,c2");

  EffectiveParams e;
  e.frequency = {w[0] + b.g1c1 * b.g1c1 / d1c1, w[1] + b.g2c1 * b.g2c1 / d2c1 + b.g2c2 * b.g2c2 / d2c2,
                 w[2] + b.g3c2 * b.g3c2 / d3c2};
  e.anharmonicity = b.qubit_anharmonicity;
  const double m12 = b.g1c1 * b.g2c1 * (1.0 / d1c1 + 1.0 / d2c1);
  const double m23 = b.g2c2 * b.g3c2 * (1.0 / d2c2 + 1.0 / d3c2);
  if (options.mode == Dressing::full_weight) {
    e.g12 = b.g12 + m12;
    e.g23 = b.g23 + m23;
    e.g13 = b.g13;
  } else {
    const double s = options.qubit_coupling_sign;
    e.g12 = s * b.g12 + 0.5 * m12;
    e.g23 = s * b.g23 + 0.5 * m23;
    e.g13 = s * b.g13;
  }
  e.max_coupler_ratio = std::max({std::abs(b.g1c1 / d1c1), std::abs(b.g2c1 / d2c1), std::abs(b.g2c2 / d2c2),
                                  std::abs(b.g3c2 / d3c2)});
  e.dispersive = e.max_coupler_ratio < 0.1;
  return e;
}

inline ResidualCouplings residual_couplings(const BareParams& b) {
  const auto& w = b.qubit_frequency;
  const auto& wc = b.coupler_frequency;
  ResidualCouplings r;
  r.g1c1 = b.g12 * b.g1c1 / detail::detuning(w[0], wc[0], "1,c1");
  r.g2c1 = b.g12 * b.g2c1 / detail::detuning(w[1], wc[0], "2,c1");
  r.g2c2 = b.g23 * b.g2c2 / detail::detuning(w[1], wc[1], "2,c2");
  r.g3c2 = b.g23 * b.g3c2 / detail::detuning(w[2], wc[1], "3,c2");
  const std::array<std::pair<const char*, double>, 4> all{
      {{"1,c1", r.g1c1}, {"2,c1", r.g2c1}, {"2,c2", r.g2c2}, {"3,c2", r.g3c2}}};
  for (const auto& [name, g] : all)
    if (std::abs(g) > units::mhz(1.0))
      r.warnings.push_back(std::string("residual coupling ") + name + " exceeds 1 MHz: " +
                           std::to_string(units::to_mhz(g)) + " MHz");
  return r;
}

enum class CouplingForm {
  rotating_wave,  // g (q_i^dag q_j + h.c.)
  charge,         // g (q_i - q_i^dag)(q_j - q_j^dag)
};

struct EffectiveModelOptions {
  Frame frame = Frame::rotating;
  CouplingForm coupling = CouplingForm::rotating_wave;
};

inline TimeDependentHamiltonian build_effective_hamiltonian(const EffectiveParams& e, const ModeLayout& layout,
                                                            const std::optional<DriveSignal>& drive = std::nullopt,
                                                            const EffectiveModelOptions& options = {}) {
  if (layout.modes() != 3) throw ConfigError("effective model needs a 3-mode layout");
  if (options.coupling == CouplingForm::charge && drive && options.frame == Frame::rotating)
    throw ConfigError("charge coupling form does not conserve excitations; use the lab frame");
  TimeDependentHamiltonian h;
  h.layout = layout;
  h.static_part = Matrix::Zero(layout.size(), layout.size());
  for (std::size_t i = 0; i < 3; ++i)
    h.static_part += detail::transmon_terms(layout, i, e.frequency[i], e.anharmonicity[i]);
  const std::array<std::tuple<std::size_t, std::size_t, double>, 3> pairs{
      {{0, 1, e.g12}, {1, 2, e.g23}, {0, 2, e.g13}}};
  for (const auto& [i, j, g] : pairs) {
    if (options.coupling == CouplingForm::rotating_wave) {
      h.static_part += g * detail::exchange(layout, i, j);
    } else {
      const Matrix a = annihilation(layout, i);
      const Matrix b = annihilation(layout, j);
      h.static_part += g * (a - a.adjoint()) * (b - b.adjoint());
    }
  }
  h.frame_frequencies = {e.frequency[0], e.frequency[1], e.frequency[2]};
  detail::attach_drive(h, drive, options.frame, 1);
  return h;
}

// Eight-level model in the qubit frame: only |110>, |011>, |111> carry energy.
// The carrier enters through delta = w_d - qubit2_frequency.
inline TimeDependentHamiltonian build_two_level_hamiltonian(double chi12, double chi23,
                                                            const std::optional<DriveSignal>& drive = std::nullopt,
                                                            double qubit2_frequency = 0.0) {
  const ModeLayout layout({2, 2, 2});
  TimeDependentHamiltonian h;
  h.layout = layout;
  h.static_part = Matrix::Zero(8, 8);
  h.static_part(6, 6) = chi12;
  h.static_part(3, 3) = chi23;
  h.static_part(7, 7) = chi12 + chi23;
  h.drive_operator = annihilation(layout, 1);
  h.frame_frequencies = {0.0, 0.0, 0.0};
  if (drive) {
    const DriveSignal s = *drive;
    const double delta = s.frequency - qubit2_frequency;
    h.drive_coefficient = [s, delta](double t) { return rotating_coefficient(t, s) * std::polar(1.0, delta * t); };
  }
  return h;
}

}  // namespace itoffoli
