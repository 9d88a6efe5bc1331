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
#include <numbers>
#include <string>

#include "itoffoli/dynamics.hpp"
#include "itoffoli/errors.hpp"
#include "itoffoli/hilbert.hpp"

namespace itoffoli {

// Basis order 000, 001, ..., 111 (qubit 1 most significant).
inline Matrix target_itoffoli() {
  Matrix u = Matrix::Identity(8, 8);
  u(5, 5) = 0.0;
  u(7, 7) = 0.0;
  u(5, 7) = complex(0.0, -1.0);
  u(7, 5) = complex(0.0, -1.0);
  return u;
}

// diag(1,1,1,e^{i phi23},1,1,e^{i phi12},e^{i(phi12+phi23)}).
inline Matrix conditional_phase_unitary(double phi12, double phi23) {
  Matrix u = Matrix::Identity(8, 8);
  u(3, 3) = std::polar(1.0, phi23);
  u(6, 6) = std::polar(1.0, phi12);
  u(7, 7) = std::polar(1.0, phi12 + phi23);
  return u;
}

inline Matrix phase_correction_unitary(double chi12, double chi23, double t) {
  return conditional_phase_unitary(chi12 * t, chi23 * t);
}

inline double wrap_phase(double x) {
  return x - 2.0 * std::numbers::pi * std::floor((x + std::numbers::pi) / (2.0 * std::numbers::pi));
}

enum class CorrectionSource { analytic, idle_reference };
enum class CorrectionScope {
  full_idle,  // remove every idle diagonal phase
  two_body,   // remove global + 3 Z + 2 ZZ only
};

// Phase angles accumulated by an idle evolution, diag(exp(i theta_k)) with
// theta_k = global + sum_i z_i b_i + zz12 b1 b2 + zz23 b2 b3 + residual_k.
struct PhaseCorrection {
  CorrectionSource source = CorrectionSource::analytic;
  double global = 0.0;
  std::array<double, 3> z{};
  double zz12 = 0.0, zz23 = 0.0;
  std::array<double, 8> residual{};
  std::array<double, 8> phases{};  // unwrapped idle phases
  double zz13_phase = 0.0;         // theta_101 - theta_100 - theta_001 + theta_000
  double three_body_phase = 0.0;   // alternating sum over all 8 phases
  double offdiagonal = 0.0;        // max off-diagonal idle magnitude

  double model(int k) const {
    const int b1 = (k >> 2) & 1, b2 = (k >> 1) & 1, b3 = k & 1;
    return global + z[0] * b1 + z[1] * b2 + z[2] * b3 + zz12 * b1 * b2 + zz23 * b2 * b3;
  }
};

// Idle phases of the two-level model with conditional shifts chi12, chi23.
inline PhaseCorrection analytic_phase_correction(double chi12, double chi23, double t) {
  PhaseCorrection c;
  c.source = CorrectionSource::analytic;
  c.zz12 = -chi12 * t;
  c.zz23 = -chi23 * t;
  for (int k = 0; k < 8; ++k) c.phases[static_cast<std::size_t>(k)] = c.model(k);
  return c;
}

// Least-squares split of 8 idle phases into global + 3 Z + 2 ZZ.
inline PhaseCorrection decompose_idle_phases(const std::array<double, 8>& wrapped) {
  // Unwrap relative to a sequential exact fit so the least-squares problem is branch consistent.
  const auto& w = wrapped;
  const double g = w[0];
  const double z1 = wrap_phase(w[4] - g), z2 = wrap_phase(w[2] - g), z3 = wrap_phase(w[1] - g);
  const double zz12 = wrap_phase(w[6] - g - z1 - z2), zz23 = wrap_phase(w[3] - g - z2 - z3);
  PhaseCorrection seq;
  seq.global = g;
  seq.z = {z1, z2, z3};
  seq.zz12 = zz12;
  seq.zz23 = zz23;
  std::array<double, 8> theta{};
  for (int k = 0; k < 8; ++k) theta[k] = seq.model(k) + wrap_phase(w[k] - seq.model(k));

  Eigen::Matrix<double, 8, 6> a;
  Eigen::Matrix<double, 8, 1> y;
  for (int k = 0; k < 8; ++k) {
    const int b1 = (k >> 2) & 1, b2 = (k >> 1) & 1, b3 = k & 1;
    a.row(k) << 1.0, b1, b2, b3, b1 * b2, b2 * b3;
    y(k) = theta[k];
  }
  const Eigen::Matrix<double, 6, 1> x = a.colPivHouseholderQr().solve(y);
  PhaseCorrection c;
  c.source = CorrectionSource::idle_reference;
  c.global = x(0);
  c.z = {x(1), x(2), x(3)};
  c.zz12 = x(4);
  c.zz23 = x(5);
  for (int k = 0; k < 8; ++k) {
    c.phases[k] = theta[k];
    c.residual[k] = theta[k] - c.model(k);
  }
  c.zz13_phase = theta[5] - theta[4] - theta[1] + theta[0];
  c.three_body_phase = theta[7] - theta[6] - theta[5] - theta[3] + theta[4] + theta[2] + theta[1] - theta[0];
  return c;
}

inline PhaseCorrection phase_correction_from_idle(const Matrix& idle, double offdiag_tol = 1e-3) {
  if (idle.rows() != 8 || idle.cols() != 8) throw ConfigError("idle propagator must be 8x8");
  double off = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if (i != j) off = std::max(off, std::abs(idle(i, j)));
  if (off > offdiag_tol)
    throw NumericalError("idle propagator is not diagonal (max off-diagonal " + std::to_string(off) +
                         "); residual exchange coupling in this basis");
  std::array<double, 8> wrapped{};
  for (int k = 0; k < 8; ++k) wrapped[k] = std::arg(idle(k, k));
  PhaseCorrection c = decompose_idle_phases(wrapped);
  c.offdiagonal = off;
  return c;
}

// Propagates the undriven Hamiltonian over the gate window.
inline PhaseCorrection idle_phase_reference(const TimeDependentHamiltonian& h, double gate_time,
                                            const PropagationConfig& cfg, const Matrix& basis,
                                            double offdiag_tol = 1e-3) {
  const GateResult idle = simulate_gate(h.undriven(), gate_time, cfg, basis);
  return phase_correction_from_idle(idle.u_sim, offdiag_tol);
}

namespace detail {

inline Matrix fix_global_phase(Matrix u) {
  const complex ref = u(0, 0);
  if (std::abs(ref) > 0.0) u *= std::abs(ref) / ref;
  return u;
}

}  // namespace detail

// Z_corr^dag U_phase^dag U_sim (and the residual diagonal for full_idle),
// global phase fixed so that the (000, 000) entry is real positive.
inline Matrix apply_corrections(const Matrix& u_sim, const PhaseCorrection& c,
                                CorrectionScope scope = CorrectionScope::full_idle) {
  if (u_sim.rows() != 8 || u_sim.cols() != 8) throw ConfigError("apply_corrections needs an 8x8 matrix");
  Matrix z = Matrix::Zero(8, 8);
  for (int k = 0; k < 8; ++k) {
    const int b1 = (k >> 2) & 1, b2 = (k >> 1) & 1, b3 = k & 1;
    z(k, k) = std::polar(1.0, c.global + c.z[0] * b1 + c.z[1] * b2 + c.z[2] * b3);
  }
  const Matrix u_phase = conditional_phase_unitary(c.zz12, c.zz23);
  Matrix out = z.adjoint() * u_phase.adjoint() * u_sim;
  if (scope == CorrectionScope::full_idle) {
    Vector r(8);
    for (int k = 0; k < 8; ++k) r(k) = std::polar(1.0, -c.residual[k]);
    out = r.asDiagonal() * out;
  }
  return detail::fix_global_phase(out);
}

inline double process_fidelity(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw ConfigError("process fidelity needs square matrices of equal shape");
  return std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.rows());
}

struct FidelityReport {
  double fidelity = 0.0;           // with the configured correction scope
  double fidelity_two_body = 0.0;  // global + Z + ZZ correction only
  double fidelity_full_idle = 0.0;
  std::array<double, 8> leakage{};
  double max_leakage = 0.0;
  double mean_leakage = 0.0;
  Matrix corrected;
  Matrix deviation;  // corrected - target
  PhaseCorrection correction;
  CorrectionScope scope = CorrectionScope::full_idle;
};

inline FidelityReport fidelity_report(const GateResult& gate, const PhaseCorrection& c,
                                      CorrectionScope scope = CorrectionScope::full_idle,
                                      const Matrix& target = target_itoffoli()) {
  FidelityReport r;
  r.scope = scope;
  r.correction = c;
  r.leakage = gate.leakage;
  for (double l : gate.leakage) {
    r.max_leakage = std::max(r.max_leakage, l);
    r.mean_leakage += l / 8.0;
  }
  const Matrix full = apply_corrections(gate.u_sim, c, CorrectionScope::full_idle);
  const Matrix two = apply_corrections(gate.u_sim, c, CorrectionScope::two_body);
  r.fidelity_full_idle = process_fidelity(target, full);
  r.fidelity_two_body = process_fidelity(target, two);
  r.corrected = scope == CorrectionScope::full_idle ? full : two;
  r.fidelity = scope == CorrectionScope::full_idle ? r.fidelity_full_idle : r.fidelity_two_body;
  r.deviation = r.corrected - target;
  return r;
}

}  // namespace itoffoli
