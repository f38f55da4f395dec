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
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wordvec/error.hpp"
#include "wordvec/huffman.hpp"
#include "wordvec/matrix.hpp"
#include "wordvec/noise.hpp"
#include "wordvec/rng.hpp"
#include "wordvec/vocab.hpp"

namespace wordvec {

enum class Objective { softmax, hs, ns };

inline std::string_view to_string(Architecture a) { return a == Architecture::cbow ? "cbow" : "sg"; }

inline std::string_view to_string(Objective o) {
  switch (o) {
    case Objective::softmax: return "softmax";
    case Objective::hs: return "hs";
    case Objective::ns: return "ns";
  }
  return "?";
}

inline Architecture parse_architecture(std::string_view s) {
  if (s == "cbow") return Architecture::cbow;
  if (s == "sg" || s == "skipgram" || s == "skip-gram") return Architecture::skipgram;
  throw InvalidConfig("unknown architecture '" + std::string(s) + "' (expected cbow|sg)");
}

inline Objective parse_objective(std::string_view s) {
  if (s == "softmax") return Objective::softmax;
  if (s == "hs") return Objective::hs;
  if (s == "ns") return Objective::ns;
  throw InvalidConfig("unknown objective '" + std::string(s) + "' (expected softmax|hs|ns)");
}

struct ModelConfig {
  std::size_t vocab_size = 0;
  std::size_t dim = 0;
  Architecture arch = Architecture::cbow;
  Objective objective = Objective::softmax;
  std::size_t negatives = 5;  // ns only
  double eta = 0.025;
  std::size_t window = 2;  // max context words on each side

  std::size_t output_rows() const {
    return objective == Objective::hs ? vocab_size - 1 : vocab_size;
  }

  void validate() const {
    if (vocab_size < 2) throw InvalidConfig("vocabulary size must be >= 2");
    if (dim < 1) throw InvalidConfig("embedding dimension must be >= 1");
    if (!(eta >= 0) || !std::isfinite(eta)) throw InvalidConfig("learning rate must be >= 0");
    if (window < 1) throw InvalidConfig("window must be >= 1");
    if (objective == Objective::ns) {
      if (negatives < 1) throw InvalidConfig("negative sample count must be >= 1");
      if (negatives >= vocab_size)
        throw InvalidConfig("negative sample count must be < vocabulary size");
    }
  }
};

/// Input vectors (one row per word) and output-side vectors (one row per
/// word, or one row per inner tree node under hierarchical softmax).
template <typename Real = double>
struct ModelState {
  Matrix<Real> input;
  Matrix<Real> output;

  template <typename Other>
  ModelState<Other> cast() const {
    return {input.template cast<Other>(), output.template cast<Other>()};
  }

  friend bool operator==(const ModelState&, const ModelState&) = default;
};

/// Input vectors uniform in [-0.5/N, 0.5/N], drawn row-major from `rng`;
/// output vectors zero.
inline ModelState<double> init_state(const ModelConfig& config, Rng& rng) {
  config.validate();
  ModelState<double> s{Matrix<double>(config.vocab_size, config.dim),
                       Matrix<double>(config.output_rows(), config.dim)};
  const double half = 0.5 / static_cast<double>(config.dim);
  for (auto& x : s.input.data()) x = rng.uniform(-half, half);
  return s;
}

/// Tree or noise table required by the configured objective.
struct OutputLayer {
  std::optional<HuffmanTree> tree;
  std::optional<NoiseDistribution> noise;

  static OutputLayer build(const ModelConfig& config, std::span<const std::uint64_t> counts,
                           double noise_power = 0.75) {
    OutputLayer layer;
    if (config.objective == Objective::hs) layer.tree = build_tree(counts);
    if (config.objective == Objective::ns) layer.noise = build_noise(counts, noise_power);
    return layer;
  }
};

// ---------------------------------------------------------------------------
// Scalar helpers

/// Logistic function. Saturated results are kept inside the open interval
/// (0, 1): the smallest positive subnormal below, the largest value under 1
/// above.
template <typename Real>
Real sigmoid(Real u) {
  Real r;
  if (u >= 0) {
    r = Real(1) / (Real(1) + std::exp(-u));
  } else {
    const Real e = std::exp(u);
    r = e / (Real(1) + e);
  }
  constexpr Real lo = std::numeric_limits<Real>::denorm_min();
  const Real hi = std::nextafter(Real(1), Real(0));
  return std::clamp(r, lo, hi);
}

/// log(sigmoid(u)) without overflow for large |u|.
template <typename Real>
Real log_sigmoid(Real u) {
  return u < 0 ? u - std::log1p(std::exp(u)) : -std::log1p(std::exp(-u));
}

// ---------------------------------------------------------------------------
// Forward pass

/// Hidden-layer output: the mean of the input vectors of `context`. For a
/// single word this is an exact copy of its row.
template <typename Real>
std::vector<Real> hidden(const ModelState<Real>& state, std::span<const WordId> context) {
  const std::size_t n = state.input.cols();
  std::vector<Real> h(n, Real(0));
  if (context.size() == 1) {
    const auto row = state.input.row(context[0]);
    return {row.begin(), row.end()};
  }
  for (WordId w : context) axpy<Real>(Real(1), state.input.row(w), h);
  const Real inv = Real(1) / static_cast<Real>(context.size());
  for (auto& x : h) x *= inv;
  return h;
}

template <typename Real>
struct SoftmaxOutput {
  std::vector<Real> scores;  // u
  std::vector<Real> probs;   // y
};

template <typename Real>
SoftmaxOutput<Real> softmax_forward(const ModelState<Real>& state, std::span<const Real> h) {
  const std::size_t v = state.output.rows();
  SoftmaxOutput<Real> out{std::vector<Real>(v), std::vector<Real>(v)};
  for (std::size_t j = 0; j < v; ++j) out.scores[j] = dot<Real>(state.output.row(j), h);
  const Real top = *std::max_element(out.scores.begin(), out.scores.end());
  Real total = 0;
  for (std::size_t j = 0; j < v; ++j) total += out.probs[j] = std::exp(out.scores[j] - top);
  for (auto& p : out.probs) p /= total;
  return out;
}

template <typename Real>
Real softmax_loss(std::span<const Real> probs, WordId target) {
  return -std::log(probs[target]);
}

/// Same quantity as softmax_loss, computed from the scores as
/// logsumexp(u) - u[target] so it stays finite when y[target] underflows.
template <typename Real>
Real softmax_loss_from_scores(std::span<const Real> scores, WordId target) {
  const Real top = *std::max_element(scores.begin(), scores.end());
  Real total = 0;
  for (Real u : scores) total += std::exp(u - top);
  return top + std::log(total) - scores[target];
}

/// Prediction errors dE/du. With one target this is y - onehot(target); with
/// several (skip-gram) it is the sum of those vectors over the targets.
template <typename Real>
std::vector<Real> softmax_errors(std::span<const Real> probs, std::span<const WordId> targets) {
  const Real c = static_cast<Real>(targets.size());
  std::vector<Real> err(probs.size());
  for (std::size_t j = 0; j < probs.size(); ++j) err[j] = c * probs[j];
  for (WordId t : targets) err[t] -= Real(1);
  return err;
}

/// EH = sum_j err_j * v'_j. Must see the output vectors before they are
/// updated in the same step.
template <typename Real>
std::vector<Real> softmax_eh(const ModelState<Real>& state, std::span<const Real> err) {
  std::vector<Real> eh(state.output.cols(), Real(0));
  for (std::size_t j = 0; j < err.size(); ++j)
    if (err[j] != 0) axpy<Real>(err[j], state.output.row(j), eh);
  return eh;
}

template <typename Real>
void softmax_update_output(ModelState<Real>& state, std::span<const Real> err,
                           std::span<const Real> h, Real eta) {
  if (eta == 0) return;
  for (std::size_t j = 0; j < err.size(); ++j)
    if (err[j] != 0) axpy<Real>(-eta * err[j], h, state.output.row(j));
}

template <typename Real>
Real hs_loss(const ModelState<Real>& state, const PathSpec& path, std::span<const Real> h) {
  Real e = 0;
  for (std::size_t j = 0; j < path.length(); ++j) {
    const Real u = dot<Real>(state.output.row(path.nodes[j]), h);
    e -= log_sigmoid(path.left[j] ? u : -u);
  }
  return e;
}

template <typename Real>
Real ns_loss(const ModelState<Real>& state, WordId target, std::span<const WordId> negatives,
             std::span<const Real> h) {
  Real e = -log_sigmoid(dot<Real>(state.output.row(target), h));
  for (WordId w : negatives) e -= log_sigmoid(-dot<Real>(state.output.row(w), h));
  return e;
}

// ---------------------------------------------------------------------------
// Backward pass
//
// Every objective's output-side gradient has the form coeff * h on a set of
// rows, and its contribution to EH is coeff * v'_row. OutputTerm records one
// such (row, coeff) pair. All coefficients of a step are computed at the
// parameters as they were when the step began; only then are rows written.

template <typename Real>
struct OutputTerm {
  std::uint32_t row;
  Real coeff;
};

/// Appends the path terms sigma(v'_j . h) - t_j for one output word and
/// returns its loss.
template <typename Real>
Real hs_terms(const ModelState<Real>& state, const PathSpec& path, std::span<const Real> h,
              std::vector<OutputTerm<Real>>& terms) {
  Real e = 0;
  for (std::size_t j = 0; j < path.length(); ++j) {
    const Real u = dot<Real>(state.output.row(path.nodes[j]), h);
    const Real t = path.left[j] ? Real(1) : Real(0);
    terms.push_back({path.nodes[j], sigmoid(u) - t});
    e -= log_sigmoid(path.left[j] ? u : -u);
  }
  return e;
}

/// Appends one term for the target (label 1) and one per negative (label 0),
/// in list order, and returns the loss.
template <typename Real>
Real ns_terms(const ModelState<Real>& state, WordId target, std::span<const WordId> negatives,
              std::span<const Real> h, std::vector<OutputTerm<Real>>& terms) {
  const Real u = dot<Real>(state.output.row(target), h);
  terms.push_back({target, sigmoid(u) - Real(1)});
  Real e = -log_sigmoid(u);
  for (WordId w : negatives) {
    const Real un = dot<Real>(state.output.row(w), h);
    terms.push_back({w, sigmoid(un)});
    e -= log_sigmoid(-un);
  }
  return e;
}

template <typename Real>
std::vector<Real> terms_eh(const ModelState<Real>& state, std::span<const OutputTerm<Real>> terms) {
  std::vector<Real> eh(state.output.cols(), Real(0));
  for (const auto& t : terms) axpy<Real>(t.coeff, state.output.row(t.row), eh);
  return eh;
}

template <typename Real>
void apply_terms(ModelState<Real>& state, std::span<const OutputTerm<Real>> terms,
                 std::span<const Real> h, Real eta) {
  if (eta == 0) return;
  for (const auto& t : terms) axpy<Real>(-eta * t.coeff, h, state.output.row(t.row));
}

/// Updates the inner-node vectors on `path` and returns EH for this word.
template <typename Real>
std::vector<Real> hs_update(ModelState<Real>& state, const PathSpec& path, std::span<const Real> h,
                            Real eta) {
  std::vector<OutputTerm<Real>> terms;
  hs_terms(state, path, h, terms);
  auto eh = terms_eh<Real>(state, terms);
  apply_terms<Real>(state, terms, h, eta);
  return eh;
}

/// Updates the target and negative output vectors and returns EH. A
/// negative listed twice is updated twice.
template <typename Real>
std::vector<Real> ns_update(ModelState<Real>& state, WordId target,
                            std::span<const WordId> negatives, std::span<const Real> h, Real eta) {
  std::vector<OutputTerm<Real>> terms;
  ns_terms(state, target, negatives, h, terms);
  auto eh = terms_eh<Real>(state, terms);
  apply_terms<Real>(state, terms, h, eta);
  return eh;
}

/// Input-side update. CBOW: every context occurrence moves by -(eta/C) EH,
/// so repeated context words move once per occurrence. Skip-gram: the single
/// input word moves by -eta EH.
template <typename Real>
void update_input(ModelState<Real>& state, std::span<const WordId> inputs,
                  std::span<const Real> eh, Real eta) {
  if (eta == 0) return;
  const Real scale = -eta / static_cast<Real>(inputs.size());
  for (WordId w : inputs) axpy<Real>(scale, eh, state.input.row(w));
}

// ---------------------------------------------------------------------------
// One training step

/// Everything one instance contributes, evaluated at a single parameter
/// point.
template <typename Real>
struct StepGradient {
  Real loss = 0;
  std::vector<Real> h;
  std::vector<OutputTerm<Real>> terms;
  std::vector<Real> eh;
};

/// Negatives for each output word of an instance (ns only; empty otherwise).
using NegativeSets = std::vector<std::vector<WordId>>;

template <typename Real>
StepGradient<Real> compute_step(const ModelState<Real>& state, const ModelConfig& config,
                                const OutputLayer& layer, const TrainingInstance& instance,
                                const NegativeSets& negatives = {}) {
  StepGradient<Real> g;
  g.h = hidden(state, std::span<const WordId>(instance.inputs));
  switch (config.objective) {
    case Objective::softmax: {
      const auto fwd = softmax_forward<Real>(state, g.h);
      const auto err = softmax_errors<Real>(fwd.probs, instance.outputs);
      for (WordId w : instance.outputs)
        g.loss += softmax_loss_from_scores<Real>(fwd.scores, w);
      g.terms.reserve(err.size());
      for (std::size_t j = 0; j < err.size(); ++j)
        g.terms.push_back({static_cast<std::uint32_t>(j), err[j]});
      break;
    }
    case Objective::hs:
      for (WordId w : instance.outputs) g.loss += hs_terms<Real>(state, layer.tree->path(w), g.h, g.terms);
      break;
    case Objective::ns:
      if (negatives.size() != instance.outputs.size())
        throw InvalidConfig("one negative set is required per output word");
      for (std::size_t c = 0; c < instance.outputs.size(); ++c)
        g.loss += ns_terms<Real>(state, instance.outputs[c], negatives[c], g.h, g.terms);
      break;
  }
  g.eh = terms_eh<Real>(state, g.terms);
  return g;
}

/// Loss of one instance through the forward functions only.
template <typename Real>
Real instance_loss(const ModelState<Real>& state, const ModelConfig& config,
                   const OutputLayer& layer, const TrainingInstance& instance,
                   const NegativeSets& negatives = {}) {
  const auto h = hidden(state, std::span<const WordId>(instance.inputs));
  Real e = 0;
  switch (config.objective) {
    case Objective::softmax: {
      const auto fwd = softmax_forward<Real>(state, h);
      for (WordId w : instance.outputs) e += softmax_loss_from_scores<Real>(fwd.scores, w);
      break;
    }
    case Objective::hs:
      for (WordId w : instance.outputs) e += hs_loss<Real>(state, layer.tree->path(w), h);
      break;
    case Objective::ns:
      for (std::size_t c = 0; c < instance.outputs.size(); ++c)
        e += ns_loss<Real>(state, instance.outputs[c], negatives.at(c), h);
      break;
  }
  return e;
}

/// Dense gradient of instance_loss with respect to both matrices, assembled
/// from compute_step.
template <typename Real>
ModelState<Real> dense_gradient(const StepGradient<Real>& g, const TrainingInstance& instance,
                                std::size_t vocab_size, std::size_t output_rows) {
  const std::size_t n = g.h.size();
  ModelState<Real> grad{Matrix<Real>(vocab_size, n), Matrix<Real>(output_rows, n)};
  for (const auto& t : g.terms) axpy<Real>(t.coeff, g.h, grad.output.row(t.row));
  const Real scale = Real(1) / static_cast<Real>(instance.inputs.size());
  for (WordId w : instance.inputs) axpy<Real>(scale, g.eh, grad.input.row(w));
  return grad;
}

struct StepReport {
  double loss = 0;  // before the update
  std::size_t touched_output_rows = 0;
};

inline NegativeSets draw_negatives(const ModelConfig& config, const OutputLayer& layer,
                                   const TrainingInstance& instance, Rng& rng) {
  NegativeSets sets;
  if (config.objective != Objective::ns) return sets;
  sets.reserve(instance.outputs.size());
  for (WordId w : instance.outputs)
    sets.push_back(sample_negatives(*layer.noise, config.negatives, w, rng));
  return sets;
}

/// hidden -> errors and EH -> output update -> input update, once.
inline StepReport train_step(ModelState<double>& state, const ModelConfig& config,
                             const OutputLayer& layer, const TrainingInstance& instance, Rng& rng,
                             double eta) {
  if (instance.inputs.empty() || instance.outputs.empty())
    throw InvalidConfig("training instance needs non-empty inputs and outputs");
  const auto negatives = draw_negatives(config, layer, instance, rng);
  const auto g = compute_step<double>(state, config, layer, instance, negatives);
  apply_terms<double>(state, g.terms, g.h, eta);
  update_input<double>(state, instance.inputs, g.eh, eta);
  return {g.loss, g.terms.size()};
}

inline StepReport train_step(ModelState<double>& state, const ModelConfig& config,
                             const OutputLayer& layer, const TrainingInstance& instance, Rng& rng) {
  return train_step(state, config, layer, instance, rng, config.eta);
}

}  // namespace wordvec
