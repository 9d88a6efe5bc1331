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

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "itoffoli/errors.hpp"

namespace itoffoli {

using complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

using Label = std::vector<int>;

// Truncation levels per mode. Mode order is (q1, q2, q3) for the effective
// models and (q1, q2, q3, c1, c2) for the full circuit model.
class ModeLayout {
 public:
  ModeLayout() = default;
  explicit ModeLayout(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw ConfigError("layout needs at least one mode");
    for (int d : dims_)
      if (d < 2) throw ConfigError("truncation levels must be >= 2");
    total_ = 1;
    for (int d : dims_) total_ *= static_cast<std::size_t>(d);
  }

  static ModeLayout uniform(std::size_t modes, int levels) { return ModeLayout(std::vector<int>(modes, levels)); }

  const std::vector<int>& dims() const { return dims_; }
  std::size_t modes() const { return dims_.size(); }
  std::size_t dimension() const { return total_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(total_); }

  bool operator==(const ModeLayout&) const = default;

 private:
  std::vector<int> dims_;
  std::size_t total_ = 0;
};

// Row-major flat index; the first mode is the most significant digit.
inline std::size_t basis_index(const ModeLayout& layout, const Label& label) {
  if (label.size() != layout.modes()) throw ConfigError("label length does not match layout");
  std::size_t index = 0;
  for (std::size_t m = 0; m < layout.modes(); ++m) {
    if (label[m] < 0 || label[m] >= layout.dims()[m])
      throw ConfigError("occupation " + std::to_string(label[m]) + " out of range for mode " + std::to_string(m));
    index = index * static_cast<std::size_t>(layout.dims()[m]) + static_cast<std::size_t>(label[m]);
  }
  return index;
}

inline Label basis_label(const ModeLayout& layout, std::size_t index) {
  if (index >= layout.dimension()) throw ConfigError("flat index out of range");
  Label label(layout.modes());
  for (std::size_t m = layout.modes(); m-- > 0;) {
    const auto d = static_cast<std::size_t>(layout.dims()[m]);
    label[m] = static_cast<int>(index % d);
    index /= d;
  }
  return label;
}

inline std::string label_string(const Label& label) {
  std::string s;
  for (int n : label) s += std::to_string(n);
  return s;
}

inline Matrix identity(const ModeLayout& layout) { return Matrix::Identity(layout.size(), layout.size()); }

inline Matrix annihilation(const ModeLayout& layout, std::size_t mode) {
  if (mode >= layout.modes()) throw ConfigError("mode index " + std::to_string(mode) + " out of range");
  Matrix a = Matrix::Zero(layout.size(), layout.size());
  for (std::size_t k = 0; k < layout.dimension(); ++k) {
    Label label = basis_label(layout, k);
    const int n = label[mode];
    if (n == 0) continue;
    label[mode] = n - 1;
    a(static_cast<Eigen::Index>(basis_index(layout, label)), static_cast<Eigen::Index>(k)) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

inline Matrix number_operator(const ModeLayout& layout, std::size_t mode) {
  if (mode >= layout.modes()) throw ConfigError("mode index " + std::to_string(mode) + " out of range");
  Matrix n = Matrix::Zero(layout.size(), layout.size());
  for (std::size_t k = 0; k < layout.dimension(); ++k)
    n(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = basis_label(layout, k)[mode];
  return n;
}

// Diagonal of sum_m weights[m] * n_m, used for frame rotations.
inline RealVector weighted_occupation(const ModeLayout& layout, const std::vector<double>& weights) {
  if (weights.size() != layout.modes()) throw ConfigError("weight count does not match layout");
  RealVector d(layout.size());
  for (std::size_t k = 0; k < layout.dimension(); ++k) {
    const Label label = basis_label(layout, k);
    double s = 0.0;
    for (std::size_t m = 0; m < layout.modes(); ++m) s += weights[m] * label[m];
    d(static_cast<Eigen::Index>(k)) = s;
  }
  return d;
}

// The 8 computational labels in order 000, 001, ..., 111 over the first three
// modes; any further modes (couplers) are in their ground state.
inline std::vector<Label> computational_labels(const ModeLayout& layout) {
  if (layout.modes() < 3) throw ConfigError("computational subspace needs three qubit modes");
  std::vector<Label> out;
  for (int k = 0; k < 8; ++k) {
    Label label(layout.modes(), 0);
    label[0] = (k >> 2) & 1;
    label[1] = (k >> 1) & 1;
    label[2] = k & 1;
    out.push_back(label);
  }
  return out;
}

inline std::vector<std::size_t> computational_indices(const ModeLayout& layout) {
  std::vector<std::size_t> out;
  for (const auto& label : computational_labels(layout)) out.push_back(basis_index(layout, label));
  return out;
}

}  // namespace itoffoli
