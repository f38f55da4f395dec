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
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "wordvec/matrix.hpp"
#include "wordvec/model.hpp"
#include "wordvec/rng.hpp"

namespace wordvec::verify {

// ---------------------------------------------------------------------------
// Finite differences

/// Central-difference estimate of dL/dtheta_i for every entry of `params`.
/// Each entry is perturbed in place and restored bit-exactly afterwards.
template <typename Real, typename LossFn>
std::vector<Real> numeric_grad(LossFn&& loss, std::span<Real> params, Real epsilon = Real(1e-6)) {
  std::vector<Real> grad(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Real saved = params[i];
    params[i] = saved + epsilon;
    const Real up = loss();
    params[i] = saved - epsilon;
    const Real down = loss();
    params[i] = saved;
    grad[i] = (up - down) / (Real(2) * epsilon);
  }
  return grad;
}

/// |a - n| / max(|a|, |n|, 1e-12).
inline double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-12});
  return std::abs(analytic - numeric) / scale;
}

struct GradReport {
  Architecture arch = Architecture::cbow;
  Objective objective = Objective::softmax;
  std::string block;  // "output" or "input"
  double max_rel_error = 0;
  double max_abs_error = 0;
  double threshold = 1e-6;
  std::size_t entries = 0;

  bool pass() const { return max_rel_error < threshold; }

  void absorb(std::span<const double> analytic, std::span<const double> numeric) {
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      max_rel_error = std::max(max_rel_error, relative_error(analytic[i], numeric[i]));
      max_abs_error = std::max(max_abs_error, std::abs(analytic[i] - numeric[i]));
    }
    entries += analytic.size();
  }
};

struct GradGrid {
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::vector<std::size_t> vocab_sizes{8, 20};
  std::vector<std::size_t> dims{3, 6};
  std::vector<std::size_t> contexts{1, 3};
  std::vector<Architecture> archs{Architecture::cbow, Architecture::skipgram};
  std::vector<Objective> objectives{Objective::softmax, Objective::hs, Objective::ns};
  std::size_t negatives = 5;
  double epsilon = 1e-6;
  double threshold = 1e-6;
};

/// One randomized gradient-check problem: weights, tree counts, an instance
/// and fixed negatives, all drawn from a seeded Rng.
struct GradProblem {
  ModelConfig config;
  OutputLayer layer;
  ModelState<double> state;
  TrainingInstance instance;
  NegativeSets negatives;
};

inline GradProblem make_problem(Architecture arch, Objective objective, std::size_t v,
                                std::size_t n, std::size_t c, std::size_t k, Rng& rng) {
  GradProblem p;
  p.config.vocab_size = v;
  p.config.dim = n;
  p.config.arch = arch;
  p.config.objective = objective;
  p.config.negatives = std::min(k, v - 1);
  p.config.eta = 0.1;
  p.config.validate();

  std::vector<std::uint64_t> counts(v);
  for (auto& x : counts) x = 1 + rng.index(50);
  p.layer = OutputLayer::build(p.config, counts);

  p.state = {Matrix<double>(v, n), Matrix<double>(p.config.output_rows(), n)};
  for (auto& x : p.state.input.data()) x = rng.uniform(-1.0, 1.0);
  for (auto& x : p.state.output.data()) x = rng.uniform(-1.0, 1.0);

  std::vector<WordId> context(c);
  for (auto& w : context) w = static_cast<WordId>(rng.index(v));
  const auto center = static_cast<WordId>(rng.index(v));
  if (arch == Architecture::cbow)
    p.instance = {context, {center}};
  else
    p.instance = {{center}, context};
  p.negatives = draw_negatives(p.config, p.layer, p.instance, rng);
  return p;
}

/// Analytic gradient of both blocks next to its finite-difference estimate.
struct BlockCheck {
  ModelState<double> analytic;
  ModelState<double> numeric;
};

/// The analytic side runs in double through compute_step. The oracle
/// differentiates instance_loss numerically in `OracleReal`, extended
/// precision by default.
template <typename OracleReal = long double>
BlockCheck check_problem(const GradProblem& p, double epsilon) {
  const auto step = compute_step<double>(p.state, p.config, p.layer, p.instance, p.negatives);
  BlockCheck out{dense_gradient(step, p.instance, p.config.vocab_size, p.config.output_rows()),
                 {Matrix<double>(p.state.input.rows(), p.state.input.cols()),
                  Matrix<double>(p.state.output.rows(), p.state.output.cols())}};
  auto wide = p.state.template cast<OracleReal>();
  const auto loss = [&] {
    return instance_loss<OracleReal>(wide, p.config, p.layer, p.instance, p.negatives);
  };
  const auto eps = static_cast<OracleReal>(epsilon);
  const auto num_out = numeric_grad<OracleReal>(loss, wide.output.data(), eps);
  const auto num_in = numeric_grad<OracleReal>(loss, wide.input.data(), eps);
  std::transform(num_out.begin(), num_out.end(), out.numeric.output.data().begin(),
                 [](OracleReal g) { return static_cast<double>(g); });
  std::transform(num_in.begin(), num_in.end(), out.numeric.input.data().begin(),
                 [](OracleReal g) { return static_cast<double>(g); });
  return out;
}

/// One report per (architecture, objective, block), each aggregated over the
/// whole grid of seeds, vocabulary sizes, dimensions and context sizes.
inline std::vector<GradReport> check_all(const GradGrid& grid) {
  std::vector<GradReport> reports;
  for (Architecture arch : grid.archs) {
    for (Objective obj : grid.objectives) {
      GradReport out{arch, obj, "output", 0, 0, grid.threshold, 0};
      GradReport in{arch, obj, "input", 0, 0, grid.threshold, 0};
      for (std::uint64_t seed : grid.seeds)
        for (std::size_t v : grid.vocab_sizes)
          for (std::size_t n : grid.dims)
            for (std::size_t c : grid.contexts) {
              Rng rng(seed * 1000003ULL + v * 1009ULL + n * 101ULL + c);
              auto problem = make_problem(arch, obj, v, n, c, grid.negatives, rng);
              const auto check = check_problem(problem, grid.epsilon);
              out.absorb(check.analytic.output.data(), check.numeric.output.data());
              in.absorb(check.analytic.input.data(), check.numeric.input.data());
            }
      reports.push_back(out);
      reports.push_back(in);
    }
  }
  return reports;
}

/// Plain-text table, one row per block.
inline std::string format_reports(std::span<const GradReport> reports) {
  std::string s = "mode  objective  block   entries  max_rel_err  max_abs_err  status\n";
  char line[160];
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%-5s %-10s %-7s %7zu  %11.3e  %11.3e  %s\n",
                  std::string(to_string(r.arch)).c_str(), std::string(to_string(r.objective)).c_str(),
                  r.block.c_str(), r.entries, r.max_rel_error, r.max_abs_error,
                  r.pass() ? "PASS" : "FAIL");
    s += line;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Reference single-unit learners

// Unit step: 1 if u > 0, else 0 (so step(0) == 0).
inline double step(double u) { return u > 0 ? 1.0 : 0.0; }

/// Perceptron rule w <- w - eta (y - t) x with y = step(w . x).
inline std::vector<double> perceptron_update(std::span<const double> w, std::span<const double> x,
                                             double t, double eta) {
  const double y = step(dot<double>(w, x));
  std::vector<double> out(w.begin(), w.end());
  axpy<double>(-eta * (y - t), x, out);
  return out;
}

/// Logistic unit trained on E = 1/2 (t - y)^2:
/// w <- w - eta (y - t) y (1 - y) x with y = sigmoid(w . x).
inline std::vector<double> logistic_unit_update(std::span<const double> w,
                                                std::span<const double> x, double t, double eta) {
  const double y = sigmoid(dot<double>(w, x));
  std::vector<double> out(w.begin(), w.end());
  axpy<double>(-eta * (y - t) * y * (1 - y), x, out);
  return out;
}

// ---------------------------------------------------------------------------
// One-hidden-layer network with logistic hidden and output units

struct RefNet {
  Matrix<double> w_in;   // K x N
  Matrix<double> w_out;  // N x M

  RefNet(std::size_t k, std::size_t n, std::size_t m) : w_in(k, n), w_out(n, m) {}

  std::size_t inputs() const { return w_in.rows(); }
  std::size_t hidden_units() const { return w_in.cols(); }
  std::size_t outputs() const { return w_out.cols(); }
};

struct RefForward {
  std::vector<double> h;
  std::vector<double> y;
};

inline RefForward forward(const RefNet& net, std::span<const double> x) {
  RefForward f{std::vector<double>(net.hidden_units()), std::vector<double>(net.outputs())};
  for (std::size_t i = 0; i < net.hidden_units(); ++i) {
    double u = 0;
    for (std::size_t k = 0; k < net.inputs(); ++k) u += net.w_in(k, i) * x[k];
    f.h[i] = sigmoid(u);
  }
  for (std::size_t j = 0; j < net.outputs(); ++j) {
    double u = 0;
    for (std::size_t i = 0; i < net.hidden_units(); ++i) u += net.w_out(i, j) * f.h[i];
    f.y[j] = sigmoid(u);
  }
  return f;
}

// E = 1/2 sum_j (y_j - t_j)^2
inline double squared_error(const RefNet& net, std::span<const double> x, std::span<const double> t) {
  const auto f = forward(net, x);
  double e = 0;
  for (std::size_t j = 0; j < f.y.size(); ++j) e += 0.5 * (f.y[j] - t[j]) * (f.y[j] - t[j]);
  return e;
}

struct BackpropResult {
  RefNet net;
  std::vector<double> output_error;  // EI'_j = dE/du'_j
  std::vector<double> hidden_error;  // EI_i  = dE/du_i
};

/// One SGD step by back propagation. Both error vectors use the weights as
/// they were before the step.
inline BackpropResult mlp_backprop(const RefNet& net, std::span<const double> x,
                                   std::span<const double> t, double eta) {
  const auto f = forward(net, x);
  BackpropResult r{net, std::vector<double>(net.outputs()), std::vector<double>(net.hidden_units())};
  for (std::size_t j = 0; j < net.outputs(); ++j)
    r.output_error[j] = (f.y[j] - t[j]) * f.y[j] * (1 - f.y[j]);
  for (std::size_t i = 0; i < net.hidden_units(); ++i) {
    double back = 0;
    for (std::size_t j = 0; j < net.outputs(); ++j) back += r.output_error[j] * net.w_out(i, j);
    r.hidden_error[i] = back * f.h[i] * (1 - f.h[i]);
  }
  for (std::size_t i = 0; i < net.hidden_units(); ++i)
    for (std::size_t j = 0; j < net.outputs(); ++j)
      r.net.w_out(i, j) -= eta * r.output_error[j] * f.h[i];
  for (std::size_t k = 0; k < net.inputs(); ++k)
    for (std::size_t i = 0; i < net.hidden_units(); ++i)
      r.net.w_in(k, i) -= eta * r.hidden_error[i] * x[k];
  return r;
}

}  // namespace wordvec::verify
