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
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include "itoffoli/errors.hpp"
#include "itoffoli/fidelity.hpp"
#include "itoffoli/pulses.hpp"

namespace itoffoli {

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

struct SimplexOptions {
  std::size_t budget = 300;     // objective evaluations
  std::size_t restarts = 4;     // fresh simplices around the incumbent
  double step = 0.3;            // initial simplex size in transformed coordinates
  double size_tol = 1e-4;       // simplex size at which a run stops
  double target = -std::numeric_limits<double>::infinity();  // stop once objective <= target
  unsigned long seed = 0;
};

struct SimplexResult {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
  std::vector<double> trace;  // objective value per evaluation
  bool budget_exhausted = false;
  bool target_met = false;
};

namespace detail {

// x = lo + (hi - lo)(1 + sin u)/2 keeps every simplex vertex inside the box.
inline double to_box(double u, const Bounds& b) { return b.lower + (b.upper - b.lower) * 0.5 * (1.0 + std::sin(u)); }
inline double from_box(double x, const Bounds& b) {
  if (b.upper == b.lower) return 0.0;
  const double s = std::clamp(2.0 * (x - b.lower) / (b.upper - b.lower) - 1.0, -1.0, 1.0);
  return std::asin(s);
}

struct SimplexContext {
  const std::function<double(const std::vector<double>&)>* objective;
  const std::vector<Bounds>* bounds;
  SimplexResult* result;
};

inline double simplex_trampoline(const gsl_vector* u, void* params) {
  auto* ctx = static_cast<SimplexContext*>(params);
  const auto& b = *ctx->bounds;
  std::vector<double> x(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) x[i] = to_box(gsl_vector_get(u, i), b[i]);
  double f;
  try {
    f = (*ctx->objective)(x);
  } catch (const std::exception&) {
    f = std::numeric_limits<double>::quiet_NaN();
  }
  if (!std::isfinite(f)) f = 1e6;
  auto& r = *ctx->result;
  ++r.evaluations;
  r.trace.push_back(f);
  if (f < r.value) {
    r.value = f;
    r.x = x;
  }
  return f;
}

}  // namespace detail

// Restarted Nelder-Mead (GSL nmsimplex2) inside box bounds. The evaluation
// count never exceeds the budget.
inline SimplexResult minimize_simplex(const std::function<double(const std::vector<double>&)>& objective,
                                      const std::vector<double>& start, const std::vector<Bounds>& bounds,
                                      const SimplexOptions& options = {}) {
  const std::size_t n = start.size();
  if (n == 0 || bounds.size() != n) throw ConfigError("simplex needs matching start and bounds");
  for (std::size_t i = 0; i < n; ++i)
    if (!(bounds[i].lower <= start[i] && start[i] <= bounds[i].upper))
      throw ConfigError("start value " + std::to_string(i) + " outside its bounds");
  SimplexResult result;
  result.x = start;
  if (options.budget < n + 1) throw ConfigError("budget smaller than one simplex");

  gsl_set_error_handler_off();
  detail::SimplexContext ctx{&objective, &bounds, &result};
  gsl_multimin_function fn{&detail::simplex_trampoline, n, &ctx};
  gsl_vector* u = gsl_vector_alloc(n);
  gsl_vector* steps = gsl_vector_alloc(n);
  gsl_multimin_fminimizer* solver = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> jitter(0.75, 1.25);

  double step = options.step;
  for (std::size_t run = 0; run <= options.restarts; ++run) {
    if (result.evaluations + n + 1 > options.budget) {
      result.budget_exhausted = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) {
      gsl_vector_set(u, i, detail::from_box(result.x[i], bounds[i]));
      gsl_vector_set(steps, i, (run == 0 ? 1.0 : jitter(rng)) * step);
    }
    const double before = result.value;
    gsl_multimin_fminimizer_set(solver, &fn, u, steps);
    while (true) {
      if (result.value <= options.target) break;
      if (result.evaluations + n + 2 > options.budget) {
        result.budget_exhausted = true;
        break;
      }
      if (gsl_multimin_fminimizer_iterate(solver) != GSL_SUCCESS) break;
      if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(solver), options.size_tol) == GSL_SUCCESS) break;
    }
    if (result.value <= options.target || result.budget_exhausted) break;
    if (run > 0 && before - result.value < 1e-12) break;
    step *= 0.5;
  }
  result.target_met = result.value <= options.target;
  gsl_multimin_fminimizer_free(solver);
  gsl_vector_free(steps);
  gsl_vector_free(u);
  return result;
}

enum class PulseField { peak_amplitude, frequency, sigma, drag_beta, phase };

inline double& pulse_field(DriveSignal& s, PulseField f) {
  switch (f) {
    case PulseField::peak_amplitude: return s.peak_amplitude;
    case PulseField::frequency: return s.frequency;
    case PulseField::sigma: return s.sigma;
    case PulseField::drag_beta: return s.drag_beta;
    case PulseField::phase: return s.phase;
  }
  throw ConfigError("unknown pulse field");
}

struct FreeParameter {
  PulseField field;
  Bounds bounds;
};

struct CalibrationResult {
  DriveSignal best;
  FidelityReport report;
  std::vector<double> trace;  // 1 - F_p per evaluation
  std::size_t evaluations = 0;
  bool target_met = false;
  bool budget_exhausted = false;
};

// Minimizes 1 - F_p(target, corrected U_sim) over the free pulse fields.
inline CalibrationResult calibrate_pulse(const std::function<FidelityReport(const DriveSignal&)>& simulate,
                                         const DriveSignal& start, const std::vector<FreeParameter>& free,
                                         const SimplexOptions& options = {}, double target_fidelity = 1.0) {
  if (free.empty()) throw ConfigError("calibration needs at least one free parameter");
  std::vector<double> x0;
  std::vector<Bounds> bounds;
  for (const auto& p : free) {
    DriveSignal s = start;
    x0.push_back(pulse_field(s, p.field));
    bounds.push_back(p.bounds);
  }
  auto apply = [&](const std::vector<double>& x) {
    DriveSignal s = start;
    for (std::size_t i = 0; i < free.size(); ++i) pulse_field(s, free[i].field) = x[i];
    return s;
  };
  auto objective = [&](const std::vector<double>& x) { return 1.0 - simulate(apply(x)).fidelity; };
  SimplexOptions o = options;
  o.target = std::max(o.target, 1.0 - target_fidelity);
  const SimplexResult r = minimize_simplex(objective, x0, bounds, o);
  CalibrationResult out;
  out.best = apply(r.x);
  out.report = simulate(out.best);
  out.trace = r.trace;
  out.evaluations = r.evaluations;
  out.target_met = out.report.fidelity >= target_fidelity;
  out.budget_exhausted = r.budget_exhausted;
  return out;
}

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct SweepRow {
  std::size_t index = 0;
  std::vector<double> point;
  bool ok = false;
  std::string message;
  std::map<std::string, double> metrics;
};

// Cartesian grid, last axis fastest.
inline std::vector<std::vector<double>> sweep_points(const std::vector<SweepAxis>& axes) {
  std::vector<std::vector<double>> points{{}};
  for (const auto& axis : axes) {
    if (axis.values.empty()) throw ConfigError("sweep axis " + axis.name + " has no values");
    std::vector<std::vector<double>> next;
    for (const auto& p : points)
      for (double v : axis.values) {
        auto q = p;
        q.push_back(v);
        next.push_back(std::move(q));
      }
    points = std::move(next);
  }
  return points;
}

// Evaluates every grid point; failures are recorded per row. Rows come back in
// grid order regardless of `jobs`. `skip` marks rows that are already done.
inline std::vector<SweepRow> parameter_sweep(
    const std::vector<SweepAxis>& axes,
    const std::function<std::map<std::string, double>(const std::vector<double>&)>& evaluate, std::size_t jobs = 1,
    const std::function<bool(std::size_t)>& skip = nullptr,
    const std::function<void(const SweepRow&)>& on_row = nullptr) {
  const auto points = sweep_points(axes);
  std::vector<SweepRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  std::mutex emit;
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      SweepRow& row = rows[i];
      row.index = i;
      row.point = points[i];
      if (skip && skip(i)) {
        row.ok = true;
        row.message = "skipped";
        continue;
      }
      try {
        row.metrics = evaluate(points[i]);
        row.ok = true;
      } catch (const std::exception& e) {
        row.ok = false;
        row.message = e.what();
      }
      if (on_row) {
        std::lock_guard<std::mutex> lock(emit);
        on_row(row);
      }
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, points.size()));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

}  // namespace itoffoli
