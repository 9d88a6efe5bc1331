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

#include "itoffoli/effective_model.hpp"
#include "itoffoli/perturbation.hpp"
#include "itoffoli/spectrum.hpp"

namespace itoffoli {

// |101> <-> |111> transition, shifted from w~2 by chi12 + chi23.
inline double drive_frequency(const EffectiveParams& e, double chi12, double chi23) {
  return e.frequency[1] + chi12 + chi23;
}

inline double drive_frequency(const EffectiveParams& e, const DispersiveShifts& shifts) {
  return drive_frequency(e, shifts.chi12.total, shifts.chi23.total);
}

inline double drive_frequency(const LabeledSpectrum& s) {
  const auto lab = computational_labels(s.layout);
  return s.energy(lab[7]) - s.energy(lab[5]);
}

}  // namespace itoffoli
