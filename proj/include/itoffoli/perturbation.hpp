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
#include <map>
#include <optional>
#include <string>

#include "itoffoli/effective_model.hpp"
#include "itoffoli/errors.hpp"
#include "itoffoli/units.hpp"

namespace itoffoli {

inline constexpr double default_resonance_guard = units::mhz(1.0);

struct ShiftEntry {
  double order2 = 0.0;
  std::optional<double> order3;
  std::optional<double> exact;
  double total = 0.0;
  std::vector<std::string> methods;
};

// chi123 is the total shift on |111> (pair shifts included); three_body is
// chi123 - chi12 - chi23 - chi13, the part no two-qubit phase can remove.
struct DispersiveShifts {
  ShiftEntry chi12, chi23, chi13, chi123, three_body;
};

struct ExactShifts {
  double chi12 = 0.0, chi23 = 0.0, chi13 = 0.0, chi123 = 0.0;
  double three_body() const { return chi123 - chi12 - chi23 - chi13; }
};

namespace detail {

class Guard {
 public:
  explicit Guard(double eps) : eps_(eps) {}
  double operator()(double value, const std::string& term) const {
    if (std::abs(value) < eps_) throw ResonanceError(term, value);
    return value;
  }

 private:
  double eps_;
};

}  // namespace detail

// Second-order pair shift for qubits i, j (0-based).
inline double chi2_pair(const EffectiveParams& e, int i, int j, double eps = default_resonance_guard) {
  const detail::Guard d(eps);
  const std::string tag = "chi" + std::to_string(i + 1) + std::to_string(j + 1) + " ";
  const double g = e.coupling(i, j);
  const double ai = e.anharmonicity[i], aj = e.anharmonicity[j];
  const double dij = e.delta(i, j), dji = e.delta(j, i), sij = e.sum(i, j);
  const double g2 = g * g;
  return -2.0 * g2 / d(ai + dij, tag + "alpha_i + Delta_ij") - 2.0 * g2 / d(aj + dji, tag + "alpha_j + Delta_ji") +
         2.0 * g2 / d(ai + sij, tag + "alpha_i + Sigma_ij") + 2.0 * g2 / d(aj + sij, tag + "alpha_j + Sigma_ij") -
         4.0 * g2 / d(ai + aj + sij, tag + "alpha_i + alpha_j + Sigma_ij");
}

inline double chi2_total(const EffectiveParams& e, double eps = default_resonance_guard) {
  return chi2_pair(e, 0, 1, eps) + chi2_pair(e, 1, 2, eps) + chi2_pair(e, 0, 2, eps);
}

namespace detail {

struct ThirdOrderDenominators {
  double a1, a2, a3, D12, D13, D23, S12, S13, S23;
  explicit ThirdOrderDenominators(const EffectiveParams& e, double eps) {
    const Guard d(eps);
    a1 = e.anharmonicity[0];
    a2 = e.anharmonicity[1];
    a3 = e.anharmonicity[2];
    D12 = d(e.delta(0, 1), "Delta_12");
    D13 = d(e.delta(0, 2), "Delta_13");
    D23 = d(e.delta(1, 2), "Delta_23");
    S12 = d(e.sum(0, 1), "Sigma_12");
    S13 = d(e.sum(0, 2), "Sigma_13");
    S23 = d(e.sum(1, 2), "Sigma_23");
    d(a1 + D12, "alpha_1 + Delta_12");
    d(a1 + D13, "alpha_1 + Delta_13");
    d(a2 + D23, "alpha_2 + Delta_23");
    d(a2 - S12, "alpha_2 - Sigma_12");
    d(a3 - S13, "alpha_3 - Sigma_13");
    d(a3 - S23, "alpha_3 - Sigma_23");
    d(a2 + S12, "alpha_2 + Sigma_12");
    d(a1 + S12, "alpha_1 + Sigma_12");
    d(a1 + S13, "alpha_1 + Sigma_13");
    d(a3 + S13, "alpha_3 + Sigma_13");
    d(a2 + S23, "alpha_2 + Sigma_23");
    d(a3 + S23, "alpha_3 + Sigma_23");
    d(a1 + a2 + S12, "alpha_1 + alpha_2 + Sigma_12");
    d(a1 + a3 + S13, "alpha_1 + alpha_3 + Sigma_13");
    d(a2 + a3 + S23, "alpha_2 + alpha_3 + Sigma_23");
  }
};

}  // namespace detail

// Three-body shift at third order; vanishes unless all three couplings are nonzero.
inline double chi3_123(const EffectiveParams& e, double eps = default_resonance_guard) {
  const detail::ThirdOrderDenominators n(e, eps);
  const double a1 = n.a1, a2 = n.a2, a3 = n.a3;
  const double D12 = n.D12, D13 = n.D13, D23 = n.D23, S12 = n.S12, S13 = n.S13, S23 = n.S23;
  const double t =
      1 / (D12 * D13) + 1 / (S12 * D13) - 2 / ((a1 + D12) * (a1 + D13)) - 4 / ((a1 + a2 + S12) * (a1 + D13)) -
      1 / (D12 * D23) + 1 / (S12 * D23) + 1 / (D13 * D23) - 2 / ((a2 - S12) * (a2 + D23)) -
      4 / ((a1 + a2 + S12) * (a2 + D23)) - 4 / ((a1 + D13) * (a2 + D23)) - 4 / ((a2 - S12) * (a3 - S13)) +
      2 / (S12 * (a3 - S13)) + 1 / (D12 * S13) + 2 / ((a2 - S12) * S13) - 3 / (S12 * S13) + 2 / ((a2 + S12) * S13) -
      1 / (D23 * S13) + 2 / ((a2 + D23) * S13) + 2 / ((a1 + S12) * (a1 + S13)) + 2 / (S12 * (a3 + S13)) -
      4 / ((a1 + D12) * (a1 + a3 + S13)) - 8 / ((a1 + a2 + S12) * (a1 + a3 + S13)) - 4 / ((a1 + D12) * (a3 - S23)) +
      2 / (S12 * (a3 - S23)) - 2 / ((a3 - S13) * (a3 - S23)) - 4 / ((a1 + a3 + S13) * (a3 - S23)) - 1 / (D12 * S23) +
      2 / ((a1 + D12) * S23) - 3 / (S12 * S23) + 2 / ((a1 + S12) * S23) - 1 / (D13 * S23) + 2 / ((a1 + D13) * S23) -
      3 / (S13 * S23) + 2 / ((a1 + S13) * S23) + 2 / ((a2 + S12) * (a2 + S23)) + 2 / (S13 * (a2 + S23)) +
      2 / (S12 * (a3 + S23)) + 2 / ((a3 + S13) * (a3 + S23)) - 4 / ((a2 - S12) * (a2 + a3 + S23)) -
      8 / ((a1 + a2 + S12) * (a2 + a3 + S23)) - 4 / ((a3 - S13) * (a2 + a3 + S23)) -
      8 / ((a1 + a3 + S13) * (a2 + a3 + S23));
  return 2.0 * e.g12 * e.g23 * e.g13 * t;
}

struct ThirdOrderEnergies {
  std::map<std::string, double> energy;  // keys "000" ... "011" (seven labels)
  double chi12 = 0.0, chi23 = 0.0, chi13 = 0.0;
  double energy_111 = 0.0;  // chi123^(3) + pairwise assembly
};

inline ThirdOrderEnergies energy_corrections_third(const EffectiveParams& e, double eps = default_resonance_guard) {
  const detail::ThirdOrderDenominators n(e, eps);
  const double a1 = n.a1, a2 = n.a2, a3 = n.a3;
  const double D12 = n.D12, D13 = n.D13, D23 = n.D23, S12 = n.S12, S13 = n.S13, S23 = n.S23;
  const double G = e.g12 * e.g23 * e.g13;
  ThirdOrderEnergies r;
  auto& E = r.energy;
  E["110"] = G * (4 / (D13 * (a2 - S12)) + 4 / (D23 * (a1 + D12)) - 2 / (S12 * D13) - 2 / (S12 * D23) -
                  8 / ((a1 + S13) * (a2 + S23)) + 4 / (D23 * (a1 + S13)) + 4 / (D13 * (a2 + S23)) - 2 / (D13 * D23) -
                  8 / ((a1 + S13) * (a1 + a2 + S12)) - 8 / ((a2 + S23) * (a1 + a2 + S12)) -
                  4 / ((a1 + D12) * (a1 + S13)) - 4 / ((a2 - S12) * (a2 + S23)));
  E["101"] = G * (4 / (D12 * (a3 - S13)) - 4 / (D23 * (a1 + D13)) - 2 / (S13 * D12) + 2 / (S13 * D23) -
                  8 / ((a1 + S12) * (a3 + S23)) - 4 / (D23 * (a1 + S12)) + 4 / (D12 * (a3 + S23)) + 2 / (D12 * D23) -
                  8 / ((a1 + S12) * (a1 + a3 + S13)) - 8 / ((a3 + S23) * (a1 + a3 + S13)) -
                  4 / ((a1 + D13) * (a1 + S12)) - 4 / ((a3 - S13) * (a3 + S23)));
  E["011"] = G * (2 / (S23 * D12) - 4 / (D13 * (a2 + D23)) - 4 / (D12 * (a3 - S23)) + 2 / (S23 * D13) -
                  8 / ((a2 + S12) * (a3 + S13)) - 4 / (D13 * (a2 + S12)) - 4 / (D12 * (a3 + S13)) - 2 / (D12 * D13) -
                  8 / ((a2 + S12) * (a2 + a3 + S23)) - 8 / ((a3 + S13) * (a2 + a3 + S23)) -
                  4 / ((a2 + D23) * (a2 + S12)) - 4 / ((a3 - S23) * (a3 + S13)));
  E["100"] = G * (2 / (S23 * D12) - 4 / (S23 * (a1 + S13)) - 4 / (S23 * (a1 + S12)) + 2 / (S23 * D13) -
                  4 / ((a1 + S12) * (a1 + S13)) - 2 / (D12 * D13));
  E["010"] = G * (2 / (S13 * D23) - 4 / (S13 * (a2 + S23)) - 2 / (S13 * D12) - 4 / (S13 * (a2 + S12)) -
                  4 / ((a2 + S12) * (a2 + S23)) + 2 / (D12 * D23));
  E["001"] = G * (-4 / (S12 * (a3 + S13)) - 4 / (S12 * (a3 + S23)) - 2 / (S12 * D13) - 2 / (S12 * D23) -
                  4 / ((a3 + S13) * (a3 + S23)) - 2 / (D13 * D23));
  E["000"] = G * (-2 / (S12 * S13) - 2 / (S12 * S23) - 2 / (S13 * S23));
  r.chi12 = E["110"] - E["100"] - E["010"] + E["000"];
  r.chi23 = E["011"] - E["010"] - E["001"] + E["000"];
  r.chi13 = E["101"] - E["100"] - E["001"] + E["000"];
  r.energy_111 = chi3_123(e, eps) + E["110"] + E["101"] + E["011"] - E["100"] - E["010"] - E["001"] + E["000"];
  return r;
}

// Totals are order2 + order3 where order3 exists. Exact values ride along
// unchanged and do not enter the totals.
inline DispersiveShifts shift_report(const EffectiveParams& e, const std::optional<ExactShifts>& exact = std::nullopt,
                                     bool third_order = true, double eps = default_resonance_guard) {
  DispersiveShifts s;
  s.chi12.order2 = chi2_pair(e, 0, 1, eps);
  s.chi23.order2 = chi2_pair(e, 1, 2, eps);
  s.chi13.order2 = chi2_pair(e, 0, 2, eps);
  s.chi123.order2 = s.chi12.order2 + s.chi23.order2 + s.chi13.order2;
  const std::array<ShiftEntry*, 5> all{&s.chi12, &s.chi23, &s.chi13, &s.chi123, &s.three_body};
  for (ShiftEntry* entry : all) entry->methods.push_back("perturbative_2");
  if (third_order) {
    const ThirdOrderEnergies t = energy_corrections_third(e, eps);
    const double three = chi3_123(e, eps);
    s.chi12.order3 = t.chi12;
    s.chi23.order3 = t.chi23;
    s.chi13.order3 = t.chi13;
    s.three_body.order3 = three;
    s.chi123.order3 = three + t.chi12 + t.chi23 + t.chi13;
    for (ShiftEntry* entry : all) entry->methods.push_back("perturbative_3");
  }
  for (ShiftEntry* entry : all) entry->total = entry->order2 + entry->order3.value_or(0.0);
  if (exact) {
    s.chi12.exact = exact->chi12;
    s.chi23.exact = exact->chi23;
    s.chi13.exact = exact->chi13;
    s.chi123.exact = exact->chi123;
    s.three_body.exact = exact->three_body();
    for (ShiftEntry* entry : all) entry->methods.push_back("exact");
  }
  return s;
}

}  // namespace itoffoli
