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
#include <tuple>
#include <vector>

#include <Eigen/Eigenvalues>

#include "itoffoli/errors.hpp"
#include "itoffoli/hilbert.hpp"
#include "itoffoli/perturbation.hpp"

namespace itoffoli {

struct Eigenpairs {
  RealVector values;  // ascending
  Matrix vectors;     // columns
};

inline Eigenpairs eigensolve(const Matrix& h, double hermiticity_tol = 1e-9) {
  if (h.rows() != h.cols()) throw ConfigError("eigensolve needs a square matrix");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > hermiticity_tol * scale)
    throw ConfigError("eigensolve input is not hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

struct LabeledLevel {
  Label label;
  double energy = 0.0;
  double overlap = 0.0;  // |<label|vector>|^2
  Eigen::Index vector = -1;
};

struct LabeledSpectrum {
  ModeLayout layout;
  std::vector<LabeledLevel> levels;
  Matrix dressed;  // column k is the eigenvector assigned to levels[k], phase fixed so <label|v> > 0

  const LabeledLevel& at(const Label& label) const {
    for (const auto& l : levels)
      if (l.label == label) return l;
    throw LabelingError("label " + label_string(label) + " not assigned");
  }
  double energy(const Label& label) const { return at(label).energy; }
};

// Greedy assignment in descending overlap order over the requested labels.
inline LabeledSpectrum assign_labels(const Eigenpairs& eig, const ModeLayout& layout, std::vector<Label> labels = {},
                                     double min_overlap = 0.5) {
  if (eig.vectors.rows() != layout.size()) throw ConfigError("eigenvectors do not match layout");
  if (labels.empty()) labels = computational_labels(layout);
  const Eigen::Index n = eig.vectors.cols();

  std::vector<std::tuple<double, std::size_t, Eigen::Index>> pairs;
  std::vector<Eigen::Index> best(labels.size(), -1);
  for (std::size_t l = 0; l < labels.size(); ++l) {
    const auto row = static_cast<Eigen::Index>(basis_index(layout, labels[l]));
    double top = -1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double w = std::norm(eig.vectors(row, k));
      pairs.emplace_back(w, l, k);
      if (w > top) {
        top = w;
        best[l] = k;
      }
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });

  std::vector<Eigen::Index> assigned(labels.size(), -1);
  std::vector<long> owner(static_cast<std::size_t>(n), -1);
  std::vector<double> weight(labels.size(), 0.0);
  for (const auto& [w, l, k] : pairs) {
    if (assigned[l] >= 0 || owner[static_cast<std::size_t>(k)] >= 0) continue;
    assigned[l] = k;
    owner[static_cast<std::size_t>(k)] = static_cast<long>(l);
    weight[l] = w;
  }

  LabeledSpectrum out;
  out.layout = layout;
  out.dressed = Matrix(layout.size(), static_cast<Eigen::Index>(labels.size()));
  for (std::size_t l = 0; l < labels.size(); ++l) {
    if (weight[l] < min_overlap) {
      const long other = owner[static_cast<std::size_t>(best[l])];
      if (other >= 0 && static_cast<std::size_t>(other) != l)
        throw LabelingError("labels " + label_string(labels[l]) + " and " + label_string(labels[other]) +
                            " compete for eigenvector " + std::to_string(best[l]));
      throw LabelingError("overlap " + std::to_string(weight[l]) + " below " + std::to_string(min_overlap) +
                          " for label " + label_string(labels[l]) + " (non-dispersive regime)");
    }
    const Eigen::Index k = assigned[l];
    const auto row = static_cast<Eigen::Index>(basis_index(layout, labels[l]));
    const complex c = eig.vectors(row, k);
    out.dressed.col(static_cast<Eigen::Index>(l)) = eig.vectors.col(k) * (std::abs(c) / c);
    out.levels.push_back({labels[l], eig.values(k), weight[l], k});
  }
  return out;
}

inline LabeledSpectrum labeled_spectrum(const Matrix& h, const ModeLayout& layout, std::vector<Label> labels = {}) {
  return assign_labels(eigensolve(h), layout, std::move(labels));
}

// Signed energy combinations on the computational labels (couplers in ground state).
inline ExactShifts dispersive_shifts_exact(const LabeledSpectrum& s) {
  const auto lab = computational_labels(s.layout);
  auto E = [&](int k) { return s.energy(lab[static_cast<std::size_t>(k)]); };
  // index = 4 n1 + 2 n2 + n3
  ExactShifts x;
  x.chi12 = E(6) - E(4) - E(2) + E(0);
  x.chi23 = E(3) - E(2) - E(1) + E(0);
  x.chi13 = E(5) - E(4) - E(1) + E(0);
  x.chi123 = E(7) - E(4) - E(2) - E(1) + 2.0 * E(0);
  return x;
}

}  // namespace itoffoli
