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
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

#include "itoffoli/errors.hpp"
#include "itoffoli/hamiltonian.hpp"
#include "itoffoli/hilbert.hpp"

namespace itoffoli {

enum class Integrator {
  magnus4,  // adaptive fourth-order Magnus, exact hermitian exponentials
  dopri5,   // adaptive Dormand-Prince (Boost.Odeint)
};

struct PropagationConfig {
  Integrator integrator = Integrator::magnus4;
  double rtol = 1e-9;
  double atol = 1e-9;
  double max_step = 0.0;  // ns; 0 selects t/50, further capped at 1/16 carrier period
  std::size_t max_steps = 2'000'000;
};

struct PropagationStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
};

using Observer = std::function<void(double, const Matrix&)>;

namespace detail {

inline void check_config(const PropagationConfig& cfg) {
  if (!(cfg.rtol > 0.0) || !(cfg.atol > 0.0)) throw ConfigError("integrator tolerances must be > 0");
  if (cfg.max_step < 0.0) throw ConfigError("max_step must be >= 0");
}

inline double step_cap(const TimeDependentHamiltonian& h, double t_final, const PropagationConfig& cfg) {
  double cap = cfg.max_step > 0.0 ? cfg.max_step : t_final / 50.0;
  if (h.driven() && h.carrier > 0.0) cap = std::min(cap, 2.0 * std::numbers::pi / h.carrier / 16.0);
  return cap;
}

// exp(-i K) applied to state, K hermitian.
inline Matrix apply_exponential(const Matrix& k, const Matrix& state) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(k);
  if (solver.info() != Eigen::Success) throw IntegrationError("eigensolver failed inside Magnus step");
  const Vector phases = (-complex(0.0, 1.0) * solver.eigenvalues().cast<complex>()).array().exp();
  const Matrix& v = solver.eigenvectors();
  return v * (phases.asDiagonal() * (v.adjoint() * state));
}

class MagnusStepper {
 public:
  explicit MagnusStepper(const TimeDependentHamiltonian& h) : h_(h) {
    if (h_.driven()) {
      const Matrix& d = h_.drive_operator;
      const Matrix dd = d.adjoint();
      comm_h0_d_ = h_.static_part * d - d * h_.static_part;
      comm_h0_dd_ = h_.static_part * dd - dd * h_.static_part;
      comm_d_dd_ = d * dd - dd * d;
    }
  }

  // Fourth-order Magnus generator over [t, t + dt] evaluated at the Gauss points.
  Matrix generator(double t, double dt) const {
    if (!h_.driven()) return dt * h_.static_part;
    const double r = std::sqrt(3.0) / 6.0;
    const complex c1 = h_.drive_coefficient(t + (0.5 - r) * dt);
    const complex c2 = h_.drive_coefficient(t + (0.5 + r) * dt);
    const Matrix& d = h_.drive_operator;
    const complex cs = 0.5 * (c1 + c2);
    Matrix k = dt * h_.static_part + dt * (cs * d + std::conj(cs) * d.adjoint());
    // [H2, H1] = (c1 - c2)[H0, D] + conj(c1 - c2)[H0, D^dag] + (c2 conj(c1) - conj(c2) c1)[D, D^dag]
    const Matrix comm = (c1 - c2) * comm_h0_d_ + std::conj(c1 - c2) * comm_h0_dd_ +
                        (c2 * std::conj(c1) - std::conj(c2) * c1) * comm_d_dd_;
    k += complex(0.0, -std::sqrt(3.0) * dt * dt / 12.0) * comm;
    return k;
  }

  Matrix step(double t, double dt, const Matrix& state) const { return apply_exponential(generator(t, dt), state); }

 private:
  const TimeDependentHamiltonian& h_;
  Matrix comm_h0_d_, comm_h0_dd_, comm_d_dd_;
};

inline std::vector<double> stop_times(double t_final, const std::vector<double>& samples) {
  std::vector<double> stops;
  for (double s : samples)
    if (s > 0.0 && s < t_final) stops.push_back(s);
  stops.push_back(t_final);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  return stops;
}

inline Matrix propagate_magnus(const TimeDependentHamiltonian& h, double t_final, const PropagationConfig& cfg,
                               Matrix state, const std::vector<double>& samples, const Observer& observer,
                               PropagationStats& stats) {
  const MagnusStepper stepper(h);
  const double cap = step_cap(h, t_final, cfg);
  double t = 0.0;
  double dt = std::min(cap, t_final / 200.0);
  if (observer) observer(0.0, state);
  for (double stop : stop_times(t_final, samples)) {
    while (t < stop) {
      if (stats.steps + stats.rejected >= cfg.max_steps)
        throw IntegrationError("tolerance not reached within " + std::to_string(cfg.max_steps) + " steps");
      const double remaining = stop - t;
      const bool last = dt >= remaining * (1.0 - 1e-12);
      const double h_step = last ? remaining : dt;
      if (!h.driven()) {
        state = stepper.step(t, h_step, state);
        t = last ? stop : t + h_step;
        ++stats.steps;
        continue;
      }
      const Matrix big = stepper.step(t, h_step, state);
      const Matrix half = stepper.step(t, 0.5 * h_step, state);
      const Matrix fine = stepper.step(t + 0.5 * h_step, 0.5 * h_step, half);
      const double err = (fine - big).cwiseAbs().maxCoeff() / 15.0;
      const double tol = cfg.atol + cfg.rtol * fine.cwiseAbs().maxCoeff();
      const double factor = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 4.0;
      if (err <= tol) {
        state = fine;
        t = last ? stop : t + h_step;
        ++stats.steps;
        double next = h_step * std::clamp(factor, 0.2, 4.0);
        if (last && h_step < dt) next = std::max(next, dt);
        dt = std::min(cap, next);
      } else {
        ++stats.rejected;
        dt = h_step * std::clamp(factor, 0.1, 0.9);
        if (dt < 1e-12 * std::max(1.0, t_final)) throw IntegrationError("step size underflow");
      }
    }
    if (observer) observer(t, state);
  }
  return state;
}

using OdeState = std::vector<complex>;

inline Matrix propagate_dopri(const TimeDependentHamiltonian& h, double t_final, const PropagationConfig& cfg,
                              const Matrix& initial, const std::vector<double>& samples, const Observer& observer,
                              PropagationStats& stats) {
  namespace ode = boost::numeric::odeint;
  const Eigen::Index rows = initial.rows(), cols = initial.cols();
  OdeState x(static_cast<std::size_t>(rows * cols));
  Eigen::Map<Matrix>(x.data(), rows, cols) = initial;
  auto rhs = [&h, rows, cols](const OdeState& in, OdeState& out, double t) {
    Eigen::Map<const Matrix> psi(in.data(), rows, cols);
    Eigen::Map<Matrix> dpsi(out.data(), rows, cols);
    dpsi.noalias() = complex(0.0, -1.0) * (h.static_part * psi);
    if (h.driven()) {
      const complex c = h.drive_coefficient(t);
      dpsi.noalias() += complex(0.0, -1.0) * c * (h.drive_operator * psi);
      dpsi.noalias() += complex(0.0, -1.0) * std::conj(c) * (h.drive_operator.adjoint() * psi);
    }
  };
  auto stepper = ode::make_controlled(cfg.atol, cfg.rtol, ode::runge_kutta_dopri5<OdeState>());
  const double cap = step_cap(h, t_final, cfg);
  double t = 0.0;
  double dt = std::min(cap, t_final / 1000.0);
  auto emit = [&](double time) {
    if (observer) observer(time, Eigen::Map<const Matrix>(x.data(), rows, cols));
  };
  emit(0.0);
  for (double stop : stop_times(t_final, samples)) {
    while (t < stop) {
      if (stats.steps + stats.rejected >= cfg.max_steps)
        throw IntegrationError("tolerance not reached within " + std::to_string(cfg.max_steps) + " steps");
      double trial = std::min({dt, cap, stop - t});
      const double before = t;
      if (stepper.try_step(rhs, x, t, trial) == ode::success) {
        ++stats.steps;
        if (stop - t < 1e-12 * std::max(1.0, stop)) t = stop;
      } else {
        ++stats.rejected;
      }
      dt = trial;
      if (t == before && dt < 1e-14) throw IntegrationError("step size underflow");
    }
    emit(t);
  }
  return Eigen::Map<const Matrix>(x.data(), rows, cols);
}

}  // namespace detail

// Evolves the columns of `initial` under H from 0 to t_final in the
// integration frame of H. `observer` is called at 0, every sample time in
// (0, t_final) and at t_final.
inline Matrix propagate(const TimeDependentHamiltonian& h, double t_final, const PropagationConfig& cfg,
                        const Matrix& initial, const std::vector<double>& samples = {},
                        const Observer& observer = nullptr, PropagationStats* stats = nullptr) {
  detail::check_config(cfg);
  if (!(t_final >= 0.0)) throw ConfigError("propagation time must be >= 0");
  if (initial.rows() != h.layout.size()) throw ConfigError("initial state does not match layout");
  PropagationStats local;
  PropagationStats& s = stats ? *stats : local;
  if (t_final == 0.0) {
    if (observer) observer(0.0, initial);
    return initial;
  }
  if (cfg.integrator == Integrator::dopri5) return detail::propagate_dopri(h, t_final, cfg, initial, samples, observer, s);
  return detail::propagate_magnus(h, t_final, cfg, initial, samples, observer, s);
}

// Full-space propagator U(t_final) in the integration frame.
inline Matrix propagate(const TimeDependentHamiltonian& h, double t_final, const PropagationConfig& cfg) {
  return propagate(h, t_final, cfg, identity(h.layout));
}

// Moves states from the integration frame to the lab frame at time t.
inline Matrix to_lab_frame(const TimeDependentHamiltonian& h, double t, const Matrix& state) {
  if (h.rotation == 0.0) return state;
  const RealVector n = weighted_occupation(h.layout, std::vector<double>(h.layout.modes(), 1.0));
  const Vector phases = (complex(0.0, -h.rotation * t) * n.cast<complex>()).array().exp();
  return phases.asDiagonal() * state;
}

// Lab-frame 8x8 block to the qubit frame: diag(exp(i r_k t)) U.
inline Matrix to_qubit_frame(const TimeDependentHamiltonian& h, double t, const Matrix& u) {
  const auto rates = h.qubit_frame_rates();
  Vector phases(8);
  for (int k = 0; k < 8; ++k) phases(k) = std::polar(1.0, rates[static_cast<std::size_t>(k)] * t);
  return phases.asDiagonal() * u;
}

enum class Basis { dressed, bare };

struct GateResult {
  Matrix u_sim;      // 8x8 projected on the computational basis, qubit frame
  Matrix columns;    // propagated basis states (dim x 8), lab frame
  Matrix basis;      // computational basis vectors used (dim x 8)
  std::array<double, 8> leakage{};
  double gate_time = 0.0;
  double unitarity_error = 0.0;  // max |C^dag C - I| over the propagated columns
  double rotation = 0.0;
  std::vector<double> frame_frequencies;
  PropagationStats stats;
};

// Computational basis: bare unit vectors, or dressed eigenvectors given as columns.
inline Matrix bare_computational_basis(const ModeLayout& layout) {
  Matrix b = Matrix::Zero(layout.size(), 8);
  const auto idx = computational_indices(layout);
  for (int k = 0; k < 8; ++k) b(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(k)]), k) = 1.0;
  return b;
}

inline GateResult computational_projection(const Matrix& columns, const Matrix& basis) {
  if (columns.rows() != basis.rows() || basis.cols() != 8 || columns.cols() != 8)
    throw ConfigError("projection needs dim x 8 columns and basis");
  GateResult r;
  r.columns = columns;
  r.basis = basis;
  r.u_sim = basis.adjoint() * columns;
  for (int j = 0; j < 8; ++j) r.leakage[static_cast<std::size_t>(j)] = std::clamp(1.0 - r.u_sim.col(j).squaredNorm(), 0.0, 1.0);
  r.unitarity_error = (columns.adjoint() * columns - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff();
  return r;
}

inline GateResult simulate_gate(const TimeDependentHamiltonian& h, double gate_time, const PropagationConfig& cfg,
                                const Matrix& basis) {
  PropagationStats stats;
  const Matrix final_state = propagate(h, gate_time, cfg, basis, {}, nullptr, &stats);
  GateResult r = computational_projection(to_lab_frame(h, gate_time, final_state), basis);
  r.u_sim = to_qubit_frame(h, gate_time, r.u_sim);
  r.gate_time = gate_time;
  r.rotation = h.rotation;
  r.frame_frequencies = h.frame_frequencies;
  r.stats = stats;
  return r;
}

struct PopulationTrace {
  std::vector<double> times;
  std::vector<std::array<double, 8>> populations;  // computational labels 000..111
  std::vector<double> norm;                         // total norm over the full space
};

inline PopulationTrace population_trace(const TimeDependentHamiltonian& h, int initial_label,
                                        const std::vector<double>& sample_times, const PropagationConfig& cfg,
                                        const Matrix& basis) {
  if (initial_label < 0 || initial_label > 7) throw ConfigError("initial label must be a computational index 0..7");
  if (sample_times.empty()) throw ConfigError("population trace needs sample times");
  const double t_final = *std::max_element(sample_times.begin(), sample_times.end());
  PopulationTrace trace;
  auto record = [&](double t, const Matrix& state) {
    const Matrix framed = to_lab_frame(h, t, state);
    const Vector amps = basis.adjoint() * framed.col(0);
    std::array<double, 8> p{};
    for (int k = 0; k < 8; ++k) p[static_cast<std::size_t>(k)] = std::norm(amps(k));
    trace.times.push_back(t);
    trace.populations.push_back(p);
    trace.norm.push_back(framed.col(0).squaredNorm());
  };
  propagate(h, t_final, cfg, basis.col(initial_label), sample_times, record);
  return trace;
}

}  // namespace itoffoli
