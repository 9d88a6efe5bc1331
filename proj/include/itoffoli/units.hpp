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

#include <numbers>

namespace itoffoli::units {

// Internal units: time in ns, angular frequency in rad/ns.

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CODATA 2018 exact values.
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double planck = 6.62607015e-34;              // J s
inline constexpr double hbar = planck / two_pi;

inline constexpr double femto = 1e-15;

constexpr double ghz(double nu) { return two_pi * nu; }
constexpr double mhz(double nu) { return two_pi * nu * 1e-3; }
constexpr double to_ghz(double omega) { return omega / two_pi; }
constexpr double to_mhz(double omega) { return omega / two_pi * 1e3; }

// e^2 / (2C) expressed as a frequency in GHz.
constexpr double charging_energy_ghz(double capacitance_farad) {
  return elementary_charge * elementary_charge / (2.0 * capacitance_farad) / planck * 1e-9;
}

// Inverse of charging_energy_ghz.
constexpr double capacitance_for_charging_energy(double ec_ghz) {
  return elementary_charge * elementary_charge / (2.0 * ec_ghz * 1e9 * planck);
}

}  // namespace itoffoli::units
