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

#include <functional>
#include <vector>

#include "itoffoli/hilbert.hpp"

namespace itoffoli {

// H(t) = H0 + c(t) D + conj(c(t)) D^dag, with D the lowering operator of the
// driven mode. Propagating this H yields a propagator in an integration frame
// rotating at `rotation` on every mode (0 for the lab frame). Projected
// computational results are reported in the frame rotating each qubit i at
// `frame_frequencies[i]`.
struct TimeDependentHamiltonian {
  ModeLayout layout;
  Matrix static_part;
  Matrix drive_operator;
  std::function<complex(double)> drive_coefficient;
  double rotation = 0.0;
  double carrier = 0.0;  // fastest explicit oscillation in the drive (lab frame)
  std::vector<double> frame_frequencies;

  bool driven() const { return static_cast<bool>(drive_coefficient); }

  complex coefficient(double t) const { return driven() ? drive_coefficient(t) : complex(0.0, 0.0); }

  Matrix at(double t) const {
    if (!driven()) return static_part;
    const complex c = drive_coefficient(t);
    return static_part + c * drive_operator + std::conj(c) * drive_operator.adjoint();
  }

  // Rates r_k = sum_i nu_i b_i of the computational labels in the qubit frame.
  std::vector<double> qubit_frame_rates() const {
    std::vector<double> r(8, 0.0);
    for (int k = 0; k < 8; ++k)
      for (int i = 0; i < 3 && i < static_cast<int>(frame_frequencies.size()); ++i)
        if ((k >> (2 - i)) & 1) r[static_cast<std::size_t>(k)] += frame_frequencies[static_cast<std::size_t>(i)];
    return r;
  }

  TimeDependentHamiltonian undriven() const {
    TimeDependentHamiltonian h = *this;
    h.drive_coefficient = nullptr;
    return h;
  }
};

}  // namespace itoffoli
