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


#include "wordvec/pca.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "wordvec/rng.hpp"

namespace wordvec {
namespace {

Matrix<double> random_symmetric(std::size_t n, Rng& rng) {
  Matrix<double> a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = rng.uniform(-2, 2);
  return a;
}

TEST(Jacobi, DiagonalMatrix) {
  Matrix<double> a(3, 3);
  a(0, 0) = 1;
  a(1, 1) = 5;
  a(2, 2) = 3;
  const auto e = jacobi_eigen(a);
  EXPECT_EQ(e.values, (std::vector<double>{5, 3, 1}));
  EXPECT_EQ(e.vectors(1, 0), 1.0);
  EXPECT_EQ(e.sweeps, 0u);
}

TEST(Jacobi, EigenpairsSatisfyDefinition) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.index(10);
    const auto a = random_symmetric(n, rng);
    const auto e = jacobi_eigen(a);
    for (std::size_t c = 0; c < n; ++c) {
      if (c > 0) {
        EXPECT_GE(e.values[c - 1], e.values[c]);
      }
      double norm = 0;
      std::size_t big = 0;
      for (std::size_t i = 0; i < n; ++i) {
        double av = 0;
        for (std::size_t k = 0; k < n; ++k) av += a(i, k) * e.vectors(k, c);
        EXPECT_NEAR(av, e.values[c] * e.vectors(i, c), 1e-9);
        norm += e.vectors(i, c) * e.vectors(i, c);
        if (std::abs(e.vectors(i, c)) > std::abs(e.vectors(big, c))) big = i;
      }
      EXPECT_NEAR(norm, 1.0, 1e-12);
      EXPECT_GT(e.vectors(big, c), 0.0);
    }
  }
}

ModelState<double> state_from(std::vector<std::vector<double>> in, std::vector<std::vector<double>> out) {
  const std::size_t n = in[0].size();
  ModelState<double> s{Matrix<double>(in.size(), n), Matrix<double>(out.size(), n)};
  for (std::size_t i = 0; i < in.size(); ++i)
    for (std::size_t k = 0; k < n; ++k) s.input(i, k) = in[i][k];
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t k = 0; k < n; ++k) s.output(i, k) = out[i][k];
  return s;
}

double dist(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

TEST(Pca, TwoDimensionsPreserveDistances) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    ModelState<double> s{Matrix<double>(6, 2), Matrix<double>(6, 2)};
    for (auto& x : s.input.data()) x = rng.uniform(-1, 1);
    for (auto& x : s.output.data()) x = rng.uniform(-1, 1);
    const auto p = pca_project(s);
    std::vector<std::array<double, 2>> raw, proj;
    for (std::size_t i = 0; i < 6; ++i) raw.push_back({s.input(i, 0), s.input(i, 1)});
    for (std::size_t i = 0; i < 6; ++i) raw.push_back({s.output(i, 0), s.output(i, 1)});
    proj = p.input;
    proj.insert(proj.end(), p.output.begin(), p.output.end());
    for (std::size_t i = 0; i < raw.size(); ++i)
      for (std::size_t j = i + 1; j < raw.size(); ++j)
        EXPECT_NEAR(dist(proj[i], proj[j]), dist(raw[i], raw[j]), 1e-9);
  }
}

TEST(Pca, IdenticalVectorsProjectToOrigin) {
  const auto s = state_from({{1, 2, 3}, {1, 2, 3}}, {{1, 2, 3}, {1, 2, 3}});
  const auto p = pca_project(s);
  for (const auto& pt : p.input) EXPECT_EQ(pt, (std::array<double, 2>{0, 0}));
  for (const auto& pt : p.output) EXPECT_EQ(pt, (std::array<double, 2>{0, 0}));
  EXPECT_EQ(p.explained_variance, (std::array<double, 2>{0, 0}));
}

TEST(Pca, ExplainedVarianceOrderedAndMatchesProjection) {
  Rng rng(10);
  ModelState<double> s{Matrix<double>(8, 5), Matrix<double>(7, 5)};
  for (auto& x : s.input.data()) x = rng.uniform(-1, 1);
  for (auto& x : s.output.data()) x = rng.uniform(-3, 3);
  for (auto basis : {PcaBasis::both, PcaBasis::input}) {
    const auto p = pca_project(s, basis);
    EXPECT_GE(p.explained_variance[0], p.explained_variance[1]);
    EXPECT_GE(p.explained_variance[1], 0.0);
    // Variance of the projected basis points equals the eigenvalue.
    std::vector<std::array<double, 2>> pts = p.input;
    if (basis == PcaBasis::both) pts.insert(pts.end(), p.output.begin(), p.output.end());
    for (int c = 0; c < 2; ++c) {
      double var = 0;
      for (const auto& pt : pts) var += pt[c] * pt[c];
      EXPECT_NEAR(var / pts.size(), p.explained_variance[c], 1e-10);
    }
  }
}

TEST(Pca, Deterministic) {
  Rng rng(11);
  ModelState<double> s{Matrix<double>(5, 4), Matrix<double>(5, 4)};
  for (auto& x : s.input.data()) x = rng.uniform(-1, 1);
  for (auto& x : s.output.data()) x = rng.uniform(-1, 1);
  const auto a = pca_project(s), b = pca_project(s);
  EXPECT_EQ(a.input, b.input);
  EXPECT_EQ(a.output, b.output);
}

TEST(Pca, OneDimensionalVectors) {
  const auto s = state_from({{1}, {3}}, {{2}, {2}});
  const auto p = pca_project(s);
  EXPECT_NEAR(p.input[0][0], -1, 1e-15);
  EXPECT_NEAR(p.input[1][0], 1, 1e-15);
  EXPECT_EQ(p.input[0][1], 0.0);
  EXPECT_EQ(p.explained_variance[1], 0.0);
}

}  // namespace
}  // namespace wordvec
