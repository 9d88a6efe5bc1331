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
#include <string>

#include "itoffoli/circuit_model.hpp"
#include "itoffoli/effective_model.hpp"
#include "itoffoli/units.hpp"

namespace fixtures {

using namespace itoffoli;

inline std::filesystem::path source_dir() { return ITOFFOLI_SOURCE_DIR; }
inline std::filesystem::path config_path(const std::string& name) { return source_dir() / "configs" / name; }

// 500 ns operating point.
inline EffectiveParams headline() {
  EffectiveParams e;
  e.frequency = {units::ghz(4.984), units::ghz(5.300), units::ghz(4.820)};
  e.anharmonicity = {units::mhz(-330), units::mhz(-240), units::mhz(-330)};
  e.g12 = units::mhz(15.4);
  e.g23 = units::mhz(29.2);
  e.g13 = units::mhz(2.0);
  return e;
}

// 350 ns operating point.
inline EffectiveParams fast() {
  EffectiveParams e;
  e.frequency = {units::ghz(5.00), units::ghz(5.300), units::ghz(4.820)};
  e.anharmonicity = {units::mhz(-300), units::mhz(-200), units::mhz(-300)};
  e.g12 = units::mhz(19.4);
  e.g23 = units::mhz(35.0);
  e.g13 = units::mhz(2.0);
  return e;
}

// Bare parameters of the reference five-mode circuit.
inline BareParams reference_bare() {
  BareParams b;
  b.qubit_frequency = {units::ghz(4.99), units::ghz(5.31), units::ghz(4.83)};
  b.qubit_anharmonicity = {units::mhz(-300), units::mhz(-250), units::mhz(-300)};
  b.coupler_frequency = {units::ghz(7.0), units::ghz(6.8)};
  b.coupler_anharmonicity = {units::mhz(-200), units::mhz(-200)};
  b.g12 = units::mhz(12);
  b.g23 = units::mhz(10.5);
  b.g13 = units::mhz(2);
  b.g1c1 = units::mhz(55);
  b.g2c1 = units::mhz(55);
  b.g2c2 = units::mhz(130);
  b.g3c2 = units::mhz(130);
  return b;
}

// Reference dispersive shifts of that circuit, MHz.
inline constexpr double reference_chi12_mhz = -5.1;
inline constexpr double reference_chi23_mhz = -4.95;
inline constexpr double reference_chi13_mhz = 0.04;
inline constexpr double reference_chi123_mhz = 0.63;

inline EffectiveParams scaled_couplings(EffectiveParams e, double lambda) {
  e.g12 *= lambda;
  e.g23 *= lambda;
  e.g13 *= lambda;
  return e;
}

}  // namespace fixtures
