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

// Reference computations used only by the tests. They share no code with the
// library builders: operators come from explicit Kronecker products and
// perturbative energies from direct Rayleigh-Schroedinger sums.

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using Mat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

inline Mat lowering(int levels) {
  Mat a = Mat::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

// Single-mode operator embedded at one mode of a uniform tensor product.
inline Mat embed(const Mat& op, int mode, int modes, int levels) {
  Mat out = Mat::Identity(1, 1);
  for (int m = 0; m < modes; ++m) {
    const Mat f = m == mode ? op : Mat::Identity(levels, levels);
    Mat next = Eigen::kroneckerProduct(out, f).eval();
    out = next;
  }
  return out;
}

struct Coupling {
  int i, j;
  double g;
};

// sum_k w_k n_k + a_k/2 n_k(n_k-1) + sum g (c_i^dag c_j + h.c.)
inline Mat exchange_model(const std::vector<double>& w, const std::vector<double>& alpha,
                          const std::vector<Coupling>& couplings, int levels) {
  const int modes = static_cast<int>(w.size());
  const int dim = static_cast<int>(std::pow(levels, modes));
  Mat h = Mat::Zero(dim, dim);
  std::vector<Mat> a;
  for (int k = 0; k < modes; ++k) a.push_back(embed(lowering(levels), k, modes, levels));
  for (int k = 0; k < modes; ++k) {
    const Mat n = a[k].adjoint() * a[k];
    h += w[k] * n + 0.5 * alpha[k] * (a[k].adjoint() * a[k].adjoint() * a[k] * a[k]);
  }
  for (const auto& c : couplings) h += c.g * (a[c.i].adjoint() * a[c.j] + a[c.j].adjoint() * a[c.i]);
  return h;
}

// Couplings g (c_i - c_i^dag)(c_j - c_j^dag); counter-rotating terms included.
inline Mat charge_model(const std::vector<double>& w, const std::vector<double>& alpha,
                        const std::vector<Coupling>& couplings, int levels) {
  Mat h = exchange_model(w, alpha, {}, levels);
  const int modes = static_cast<int>(w.size());
  for (const auto& c : couplings) {
    const Mat a = embed(lowering(levels), c.i, modes, levels);
    const Mat b = embed(lowering(levels), c.j, modes, levels);
    h += c.g * (a - a.adjoint()) * (b - b.adjoint());
  }
  return h;
}

inline int flat_index(const std::vector<int>& label, int levels) {
  int k = 0;
  for (int n : label) k = k * levels + n;
  return k;
}

struct PerturbativeEnergy {
  double second = 0.0;
  double third = 0.0;
};

// Non-degenerate Rayleigh-Schroedinger corrections of level n for H = H0 + V,
// with H0 = diag(h) and V the off-diagonal part.
inline PerturbativeEnergy rayleigh_schroedinger(const Mat& h, int n) {
  const int dim = static_cast<int>(h.rows());
  Eigen::VectorXd e0(dim);
  for (int k = 0; k < dim; ++k) e0(k) = h(k, k).real();
  Mat v = h;
  v.diagonal().setZero();
  PerturbativeEnergy r;
  for (int m = 0; m < dim; ++m) {
    if (m == n || v(m, n) == cplx(0.0)) continue;
    r.second += std::norm(v(m, n)) / (e0(n) - e0(m));
  }
  for (int m = 0; m < dim; ++m) {
    if (m == n || v(n, m) == cplx(0.0)) continue;
    for (int k = 0; k < dim; ++k) {
      if (k == n || v(m, k) == cplx(0.0) || v(k, n) == cplx(0.0)) continue;
      r.third += (v(n, m) * v(m, k) * v(k, n)).real() / ((e0(n) - e0(m)) * (e0(n) - e0(k)));
    }
  }
  return r;
}

// Dispersive combinations over energies indexed by computational label k = 4 n1 + 2 n2 + n3.
struct Shifts {
  double chi12, chi23, chi13, chi123;
};
inline Shifts combine(const std::array<double, 8>& e) {
  return {e[6] - e[4] - e[2] + e[0], e[3] - e[2] - e[1] + e[0], e[5] - e[4] - e[1] + e[0],
          e[7] - e[4] - e[2] - e[1] + 2.0 * e[0]};
}

// Exact energies of the computational states by maximum overlap.
inline std::array<double, 8> computational_energies(const Mat& h, int modes, int levels) {
  Eigen::SelfAdjointEigenSolver<Mat> s(h);
  std::array<double, 8> e{};
  for (int k = 0; k < 8; ++k) {
    std::vector<int> label(static_cast<std::size_t>(modes), 0);
    label[0] = (k >> 2) & 1;
    label[1] = (k >> 1) & 1;
    label[2] = k & 1;
    const int row = flat_index(label, levels);
    Eigen::Index best = 0;
    s.eigenvectors().row(row).cwiseAbs2().maxCoeff(&best);
    e[static_cast<std::size_t>(k)] = s.eigenvalues()(best);
  }
  return e;
}

inline Mat expm_hermitian(const Mat& h, double t) { return (cplx(0.0, -t) * h).exp(); }

}  // namespace oracle
