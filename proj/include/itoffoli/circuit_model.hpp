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
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "itoffoli/errors.hpp"
#include "itoffoli/hamiltonian.hpp"
#include "itoffoli/hilbert.hpp"
#include "itoffoli/pulses.hpp"
#include "itoffoli/units.hpp"

namespace itoffoli {

// Capacitances in farads, Josephson energies in GHz (E/h), fluxes in units of
// the reduced flux quantum.
struct CircuitSpec {
  std::array<double, 3> qubit_capacitance{};
  std::array<double, 2> coupler_capacitance{};
  double c_1c1 = 0.0, c_2c1 = 0.0, c_2c2 = 0.0, c_3c2 = 0.0;
  double c_12 = 0.0, c_23 = 0.0;
  std::array<double, 3> qubit_ej{};
  std::array<double, 2> coupler_ej{};
  std::array<double, 2> coupler_flux{};
};

struct EffectiveCapacitances {
  std::array<double, 3> qubit{};
  std::array<double, 2> coupler{};
  double inv_12 = 0.0, inv_23 = 0.0, inv_13 = 0.0;
  double inv_1c1 = 0.0, inv_1c2 = 0.0, inv_2c1 = 0.0, inv_2c2 = 0.0, inv_3c2 = 0.0;
};

enum class CapacitanceMethod { closed_form, exact_inverse };

// Angular frequencies in rad/ns; charging energies in GHz.
struct BareParams {
  std::array<double, 3> qubit_frequency{};
  std::array<double, 3> qubit_anharmonicity{};
  std::array<double, 2> coupler_frequency{};
  std::array<double, 2> coupler_anharmonicity{};
  double g12 = 0.0, g23 = 0.0, g13 = 0.0;
  double g1c1 = 0.0, g2c1 = 0.0, g2c2 = 0.0, g3c2 = 0.0;
  std::array<double, 3> qubit_zero_point_phase{};
  std::array<double, 2> coupler_zero_point_phase{};
  std::array<double, 3> qubit_charging_energy{};
  std::array<double, 2> coupler_charging_energy{};
  std::vector<std::string> warnings;
};

inline void validate(const CircuitSpec& s) {
  auto positive = [](double v, const std::string& name) {
    if (!(v > 0.0)) throw ConfigError(name + " must be > 0");
  };
  for (int i = 0; i < 3; ++i) positive(s.qubit_capacitance[i], "qubit capacitance " + std::to_string(i + 1));
  for (int j = 0; j < 2; ++j) positive(s.coupler_capacitance[j], "coupler capacitance " + std::to_string(j + 1));
  positive(s.c_1c1, "C_1c1");
  positive(s.c_2c1, "C_2c1");
  positive(s.c_2c2, "C_2c2");
  positive(s.c_3c2, "C_3c2");
  if (s.c_12 < 0.0 || s.c_23 < 0.0) throw ConfigError("qubit-qubit capacitances must be >= 0");
}

// Warns when C_ij << C_kc << C_m is violated by less than `ratio`.
inline std::vector<std::string> check_hierarchy(const CircuitSpec& s, double ratio = 10.0) {
  std::vector<std::string> warnings;
  const double max_direct = std::max(s.c_12, s.c_23);
  const double min_coupler = std::min({s.c_1c1, s.c_2c1, s.c_2c2, s.c_3c2});
  const double max_coupler = std::max({s.c_1c1, s.c_2c1, s.c_2c2, s.c_3c2});
  double min_mode = std::min(s.coupler_capacitance[0], s.coupler_capacitance[1]);
  for (double c : s.qubit_capacitance) min_mode = std::min(min_mode, c);
  if (max_direct * ratio > min_coupler) warnings.push_back("qubit-qubit capacitance not << qubit-coupler capacitance");
  if (max_coupler * ratio > min_mode) warnings.push_back("qubit-coupler capacitance not << mode capacitance");
  return warnings;
}

namespace detail {

inline Eigen::Matrix<double, 5, 5> capacitance_matrix(const CircuitSpec& s) {
  Eigen::Matrix<double, 5, 5> c = Eigen::Matrix<double, 5, 5>::Zero();
  // Nodes: q1, q2, q3, c1, c2.
  const std::array<std::tuple<int, int, double>, 6> links{{{0, 1, s.c_12},
                                                           {1, 2, s.c_23},
                                                           {0, 3, s.c_1c1},
                                                           {1, 3, s.c_2c1},
                                                           {1, 4, s.c_2c2},
                                                           {2, 4, s.c_3c2}}};
  for (int i = 0; i < 3; ++i) c(i, i) = s.qubit_capacitance[i];
  for (int j = 0; j < 2; ++j) c(3 + j, 3 + j) = s.coupler_capacitance[j];
  for (const auto& [a, b, v] : links) {
    c(a, a) += v;
    c(b, b) += v;
    c(a, b) -= v;
    c(b, a) -= v;
  }
  return c;
}

}  // namespace detail

inline EffectiveCapacitances reduce_capacitance_network(const CircuitSpec& s,
                                                        CapacitanceMethod method = CapacitanceMethod::closed_form) {
  validate(s);
  EffectiveCapacitances out;
  if (method == CapacitanceMethod::exact_inverse) {
    const auto c = detail::capacitance_matrix(s);
    Eigen::FullPivLU<Eigen::Matrix<double, 5, 5>> lu(c);
    if (!lu.isInvertible()) throw ConfigError("capacitance matrix is singular");
    const Eigen::Matrix<double, 5, 5> inv = lu.inverse();
    // Kinetic term (1/2) pi^T C^-1 pi: diagonal 1/(2 C_i), cross terms -1/(2 C_ij).
    for (int i = 0; i < 3; ++i) out.qubit[i] = 1.0 / inv(i, i);
    for (int j = 0; j < 2; ++j) out.coupler[j] = 1.0 / inv(3 + j, 3 + j);
    out.inv_12 = -2.0 * inv(0, 1);
    out.inv_23 = -2.0 * inv(1, 2);
    out.inv_13 = -2.0 * inv(0, 2);
    out.inv_1c1 = -2.0 * inv(0, 3);
    out.inv_1c2 = -2.0 * inv(0, 4);
    out.inv_2c1 = -2.0 * inv(1, 3);
    out.inv_2c2 = -2.0 * inv(1, 4);
    out.inv_3c2 = -2.0 * inv(2, 4);
    return out;
  }
  const double q1 = s.qubit_capacitance[0] + s.c_12 + s.c_1c1;
  const double q2 = s.qubit_capacitance[1] + s.c_12 + s.c_23 + s.c_2c1 + s.c_2c2;
  const double q3 = s.qubit_capacitance[2] + s.c_23 + s.c_3c2;
  const double k1 = s.coupler_capacitance[0] + s.c_1c1 + s.c_2c1;
  const double k2 = s.coupler_capacitance[1] + s.c_2c2 + s.c_3c2;
  out.qubit = {q1, q2, q3};
  out.coupler = {k1, k2};
  out.inv_12 = -2.0 * s.c_12 / (q1 * q2);
  out.inv_23 = -2.0 * s.c_23 / (q2 * q3);
  out.inv_13 = 4.0 * s.c_12 * s.c_23 / (q1 * q2 * q3);
  out.inv_1c1 = -2.0 * s.c_1c1 / (q1 * k1);
  out.inv_1c2 = 4.0 * s.c_12 * s.c_2c2 / (q1 * q2 * k2);
  out.inv_2c1 = -2.0 * s.c_2c1 / (q2 * k1);
  out.inv_2c2 = -2.0 * s.c_2c2 / (q2 * k2);
  out.inv_3c2 = -2.0 * s.c_3c2 / (q3 * k2);
  return out;
}

inline double coupler_josephson_energy(double ej, double flux) { return 2.0 * ej * std::cos(0.5 * flux); }

namespace detail {

struct ModeQuantities {
  double frequency;     // rad/ns
  double anharmonicity; // rad/ns
  double zero_point;
  double charging;      // GHz
};

inline ModeQuantities transmon_mode(double capacitance, double ej, const std::string& name,
                                    std::vector<std::string>& warnings) {
  if (!(ej > 0.0)) throw ConfigError("nonpositive effective Josephson energy for " + name);
  const double ec = units::charging_energy_ghz(capacitance);
  if (ej / ec < 20.0) warnings.push_back(name + ": E_J/E_C = " + std::to_string(ej / ec) + " below 20");
  return {units::ghz(std::sqrt(8.0 * ec * ej) - ec), units::ghz(-ec), std::pow(2.0 * ec / ej, 0.25), ec};
}

// Coupling from an inverse coupling capacitance; the implied coupling
// capacitance is -C_i C_j (1/C_ij) / 2.
inline double coupling(double inverse, double ci, double cj, double wi, double wj) {
  const double kappa = -0.5 * ci * cj * inverse;
  return 0.5 * kappa / std::sqrt(ci * cj) * std::sqrt(wi * wj);
}

}  // namespace detail

inline BareParams quantize(const EffectiveCapacitances& caps, const CircuitSpec& spec) {
  BareParams p;
  p.warnings = check_hierarchy(spec);
  for (int i = 0; i < 3; ++i) {
    const auto m = detail::transmon_mode(caps.qubit[i], spec.qubit_ej[i], "qubit " + std::to_string(i + 1), p.warnings);
    p.qubit_frequency[i] = m.frequency;
    p.qubit_anharmonicity[i] = m.anharmonicity;
    p.qubit_zero_point_phase[i] = m.zero_point;
    p.qubit_charging_energy[i] = m.charging;
  }
  for (int j = 0; j < 2; ++j) {
    const double ej = coupler_josephson_energy(spec.coupler_ej[j], spec.coupler_flux[j]);
    const auto m = detail::transmon_mode(caps.coupler[j], ej, "coupler " + std::to_string(j + 1), p.warnings);
    p.coupler_frequency[j] = m.frequency;
    p.coupler_anharmonicity[j] = m.anharmonicity;
    p.coupler_zero_point_phase[j] = m.zero_point;
    p.coupler_charging_energy[j] = m.charging;
  }
  const auto& q = caps.qubit;
  const auto& k = caps.coupler;
  const auto& wq = p.qubit_frequency;
  const auto& wc = p.coupler_frequency;
  p.g12 = detail::coupling(caps.inv_12, q[0], q[1], wq[0], wq[1]);
  p.g23 = detail::coupling(caps.inv_23, q[1], q[2], wq[1], wq[2]);
  p.g13 = detail::coupling(caps.inv_13, q[0], q[2], wq[0], wq[2]);
  p.g1c1 = detail::coupling(caps.inv_1c1, q[0], k[0], wq[0], wc[0]);
  p.g2c1 = detail::coupling(caps.inv_2c1, q[1], k[0], wq[1], wc[0]);
  p.g2c2 = detail::coupling(caps.inv_2c2, q[1], k[1], wq[1], wc[1]);
  p.g3c2 = detail::coupling(caps.inv_3c2, q[2], k[1], wq[2], wc[1]);
  return p;
}

enum class Frame { lab, rotating };

// Signs multiplying the exchange terms (g q_i^dag q_j + h.c.) of the full model.
struct FullModelOptions {
  Frame frame = Frame::rotating;
  double qubit_coupling_sign = -1.0;
  double coupler_coupling_sign = -1.0;
};

namespace detail {

inline Matrix transmon_terms(const ModeLayout& layout, std::size_t mode, double frequency, double anharmonicity) {
  const Matrix a = annihilation(layout, mode);
  const Matrix ad = a.adjoint();
  return frequency * (ad * a) + 0.5 * anharmonicity * (ad * ad * a * a);
}

inline Matrix exchange(const ModeLayout& layout, std::size_t i, std::size_t j) {
  const Matrix a = annihilation(layout, i);
  const Matrix b = annihilation(layout, j);
  return a.adjoint() * b + b.adjoint() * a;
}

inline void attach_drive(TimeDependentHamiltonian& h, const std::optional<DriveSignal>& drive, Frame frame,
                         std::size_t driven_mode) {
  h.drive_operator = annihilation(h.layout, driven_mode);
  if (!drive) return;
  const DriveSignal s = *drive;
  if (frame == Frame::lab) {
    h.carrier = s.frequency;
    h.drive_coefficient = [s](double t) { return complex(drag_drive(t, s), 0.0); };
  } else {
    h.rotation = s.frequency;
    h.static_part -= s.frequency * weighted_occupation(h.layout, std::vector<double>(h.layout.modes(), 1.0))
                                       .cast<complex>()
                                       .asDiagonal()
                                       .toDenseMatrix();
    h.drive_coefficient = [s](double t) { return rotating_coefficient(t, s); };
  }
}

}  // namespace detail

// Mode order (q1, q2, q3, c1, c2); drive on q2.
inline TimeDependentHamiltonian build_full_hamiltonian(const BareParams& p, const ModeLayout& layout,
                                                       const std::optional<DriveSignal>& drive = std::nullopt,
                                                       const FullModelOptions& options = {}) {
  if (layout.modes() != 5) throw ConfigError("full model needs a 5-mode layout");
  TimeDependentHamiltonian h;
  h.layout = layout;
  h.static_part = Matrix::Zero(layout.size(), layout.size());
  for (std::size_t i = 0; i < 3; ++i)
    h.static_part += detail::transmon_terms(layout, i, p.qubit_frequency[i], p.qubit_anharmonicity[i]);
  for (std::size_t j = 0; j < 2; ++j)
    h.static_part += detail::transmon_terms(layout, 3 + j, p.coupler_frequency[j], p.coupler_anharmonicity[j]);
  const double sq = options.qubit_coupling_sign;
  const double sc = options.coupler_coupling_sign;
  h.static_part += sq * p.g12 * detail::exchange(layout, 0, 1);
  h.static_part += sq * p.g23 * detail::exchange(layout, 1, 2);
  h.static_part += sq * p.g13 * detail::exchange(layout, 0, 2);
  h.static_part += sc * p.g1c1 * detail::exchange(layout, 0, 3);
  h.static_part += sc * p.g2c1 * detail::exchange(layout, 1, 3);
  h.static_part += sc * p.g2c2 * detail::exchange(layout, 1, 4);
  h.static_part += sc * p.g3c2 * detail::exchange(layout, 2, 4);
  h.frame_frequencies = {p.qubit_frequency[0], p.qubit_frequency[1], p.qubit_frequency[2], p.coupler_frequency[0],
                         p.coupler_frequency[1]};
  detail::attach_drive(h, drive, options.frame, 1);
  return h;
}

}  // namespace itoffoli
