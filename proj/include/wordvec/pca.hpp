// Copyright 2026 The wordvec Authors. All Rights Reserved.
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
#include <numeric>
#include <vector>

#include "wordvec/matrix.hpp"
#include "wordvec/model.hpp"

namespace wordvec {

struct SymmetricEigen {
  std::vector<double> values;  // descending
  Matrix<double> vectors;      // column i pairs with values[i]
  std::size_t sweeps = 0;
};

inline double off_diagonal_norm(const Matrix<double>& a) {
  double s = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

/// Cyclic Jacobi eigensolver for a small symmetric matrix. Sweeps rotate away
/// every off-diagonal pair in row order until the off-diagonal Frobenius norm
/// is at most `tol`. Each eigenvector's largest-magnitude component is made
/// positive (first such component on ties).
inline SymmetricEigen jacobi_eigen(Matrix<double> a, double tol = 1e-12,
                                   std::size_t max_sweeps = 100) {
  const std::size_t n = a.rows();
  Matrix<double> v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1;

  std::size_t sweep = 0;
  for (; sweep < max_sweeps && off_diagonal_norm(a) > tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0) continue;
        // Rotation angle that zeroes a(p,q) (Rutishauser's formulation).
        const double theta = (a(q, q) - a(p, p)) / (2 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  SymmetricEigen out{std::vector<double>(n), Matrix<double>(n, n), sweep};
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    out.values[col] = a(src, src);
    std::size_t big = 0;
    for (std::size_t k = 1; k < n; ++k)
      if (std::abs(v(k, src)) > std::abs(v(big, src))) big = k;
    const double sign = v(big, src) < 0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, col) = sign * v(k, src);
  }
  return out;
}

enum class PcaBasis { both, input };

struct PcaProjection {
  std::vector<std::array<double, 2>> input;   // one point per input vector
  std::vector<std::array<double, 2>> output;  // one point per output/inner vector
  std::array<double, 2> explained_variance{0, 0};
};

/// Projects input and output vectors onto the top two principal axes of the
/// chosen basis set (both families stacked, or input vectors only). Vectors
/// are centered on the basis set's mean.
inline PcaProjection pca_project(const ModelState<double>& state, PcaBasis basis = PcaBasis::both) {
  const std::size_t n = state.input.cols();
  std::vector<std::span<const double>> rows;
  for (std::size_t i = 0; i < state.input.rows(); ++i) rows.push_back(state.input.row(i));
  if (basis == PcaBasis::both)
    for (std::size_t i = 0; i < state.output.rows(); ++i) rows.push_back(state.output.row(i));

  std::vector<double> mean(n, 0.0);
  for (auto r : rows) axpy<double>(1.0, r, mean);
  for (auto& m : mean) m /= static_cast<double>(rows.size());

  Matrix<double> cov(n, n);
  std::vector<double> centered(n);
  for (auto r : rows) {
    for (std::size_t k = 0; k < n; ++k) centered[k] = r[k] - mean[k];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) cov(i, j) += centered[i] * centered[j];
  }
  for (auto& x : cov.data()) x /= static_cast<double>(rows.size());

  const auto eig = jacobi_eigen(cov);
  const std::size_t comps = std::min<std::size_t>(2, n);
  PcaProjection out;
  for (std::size_t c = 0; c < comps; ++c) out.explained_variance[c] = std::max(0.0, eig.values[c]);

  const auto project = [&](std::span<const double> r) {
    std::array<double, 2> pt{0, 0};
    for (std::size_t c = 0; c < comps; ++c)
      for (std::size_t k = 0; k < n; ++k) pt[c] += (r[k] - mean[k]) * eig.vectors(k, c);
    return pt;
  };
  for (std::size_t i = 0; i < state.input.rows(); ++i) out.input.push_back(project(state.input.row(i)));
  for (std::size_t i = 0; i < state.output.rows(); ++i) out.output.push_back(project(state.output.row(i)));
  return out;
}

}  // namespace wordvec
