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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "itoffoli/errors.hpp"
#include "itoffoli/hilbert.hpp"

namespace itoffoli {

enum class Envelope { gaussian, flat_top_gaussian };

// Times in ns, angular frequencies in rad/ns, beta in ns.
struct DriveSignal {
  Envelope envelope = Envelope::gaussian;
  double peak_amplitude = 0.0;
  double gate_time = 0.0;
  double sigma = 0.0;
  double drag_beta = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
  double flat_top = 0.0;  // plateau length, flat_top_gaussian only
};

namespace detail {

inline void check_signal(const DriveSignal& s) {
  if (!(s.sigma > 0.0)) throw ConfigError("pulse sigma must be > 0");
  if (!(s.gate_time > 0.0)) throw ConfigError("gate time must be > 0");
  if (s.flat_top < 0.0 || s.flat_top >= s.gate_time) throw ConfigError("flat_top must lie in [0, gate_time)");
}

// Unit-peak Gaussian profile and derivative, before the endpoint offset.
// For flat_top_gaussian the two half Gaussians are separated by the plateau.
inline double raw_profile(double t, const DriveSignal& s, double* derivative) {
  const double half = 0.5 * s.gate_time;
  const double plateau = s.envelope == Envelope::flat_top_gaussian ? 0.5 * s.flat_top : 0.0;
  double x = t - half;
  if (std::abs(x) <= plateau) {
    if (derivative) *derivative = 0.0;
    return 1.0;
  }
  x = x > 0 ? x - plateau : x + plateau;
  const double v = std::exp(-x * x / (2.0 * s.sigma * s.sigma));
  if (derivative) *derivative = -x / (s.sigma * s.sigma) * v;
  return v;
}

inline double edge_value(const DriveSignal& s) {
  const double reach = 0.5 * s.gate_time - (s.envelope == Envelope::flat_top_gaussian ? 0.5 * s.flat_top : 0.0);
  return std::exp(-reach * reach / (2.0 * s.sigma * s.sigma));
}

}  // namespace detail

// Endpoint-subtracted, peak-normalized Gaussian: A(0) = A(t_g) = 0, A(t_g/2) = peak.
inline double gaussian_envelope(double t, const DriveSignal& s) {
  detail::check_signal(s);
  if (t <= 0.0 || t >= s.gate_time) return 0.0;
  const double edge = detail::edge_value(s);
  return s.peak_amplitude * (detail::raw_profile(t, s, nullptr) - edge) / (1.0 - edge);
}

inline double envelope_derivative(double t, const DriveSignal& s) {
  detail::check_signal(s);
  if (t <= 0.0 || t >= s.gate_time) return 0.0;
  double d = 0.0;
  detail::raw_profile(t, s, &d);
  return s.peak_amplitude * d / (1.0 - detail::edge_value(s));
}

// Real lab-frame drive Omega(t) multiplying (q2 + q2^dag).
inline double drag_drive(double t, const DriveSignal& s) {
  const double theta = s.frequency * t + s.phase;
  return gaussian_envelope(t, s) * std::cos(theta) + s.drag_beta * envelope_derivative(t, s) * std::sin(theta);
}

// Coefficient of q2 in the frame rotating at the carrier after dropping the
// 2 w_d terms; the q2^dag coefficient is its conjugate.
inline complex rotating_coefficient(double t, const DriveSignal& s) {
  const complex slow(gaussian_envelope(t, s), -s.drag_beta * envelope_derivative(t, s));
  return 0.5 * std::polar(1.0, s.phase) * slow;
}

inline double default_drag_beta(double anharmonicity) {
  if (anharmonicity == 0.0) throw ConfigError("DRAG default needs a nonzero anharmonicity");
  return -1.0 / anharmonicity;
}

inline double max_envelope_derivative(const DriveSignal& s) {
  // Gaussian flank maximum sits at |t - centre| = sigma unless clipped by the window.
  const double reach = 0.5 * s.gate_time - (s.envelope == Envelope::flat_top_gaussian ? 0.5 * s.flat_top : 0.0);
  const double x = std::min(s.sigma, reach);
  return std::abs(s.peak_amplitude) * x / (s.sigma * s.sigma) * std::exp(-x * x / (2.0 * s.sigma * s.sigma)) /
         (1.0 - detail::edge_value(s));
}

// Drive amplitude should stay below both conditional shifts.
inline bool weak_drive(const DriveSignal& s, double chi12, double chi23) {
  return std::abs(s.peak_amplitude) < std::min(std::abs(chi12), std::abs(chi23));
}

struct BiasSegment {
  double idle_flux = 0.0;
  double hold_flux = 0.0;
  double ramp = 0.0;
  double hold = 0.0;  // covers the drive window

  double total() const { return 2.0 * ramp + hold; }

  double value(double t) const {
    if (t <= 0.0 || t >= total()) return idle_flux;
    const double span = hold_flux - idle_flux;
    if (t < ramp) return idle_flux + span * 0.5 * (1.0 - std::cos(std::numbers::pi * t / ramp));
    if (t <= ramp + hold) return hold_flux;
    const double u = t - ramp - hold;
    return hold_flux - span * 0.5 * (1.0 - std::cos(std::numbers::pi * u / ramp));
  }
};

struct BiasSchedule {
  std::vector<BiasSegment> couplers;
  double drive_start() const { return couplers.empty() ? 0.0 : couplers.front().ramp; }
};

// Cosine ramp, hold over the gate window, cosine ramp back.
inline BiasSchedule bias_schedule(const std::vector<double>& hold_flux, double ramp, double gate_time,
                                  double idle_flux = 0.0) {
  if (!(gate_time > 0.0)) throw ConfigError("bias window too short: gate time must be > 0");
  if (ramp < 0.0) throw ConfigError("ramp duration must be >= 0");
  BiasSchedule out;
  for (double f : hold_flux) out.couplers.push_back({idle_flux, f, ramp, gate_time});
  return out;
}

}  // namespace itoffoli
