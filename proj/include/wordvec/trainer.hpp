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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "wordvec/error.hpp"
#include "wordvec/model.hpp"
#include "wordvec/rng.hpp"
#include "wordvec/vocab.hpp"

namespace wordvec {

enum class Schedule { constant, linear_decay };

struct TrainPlan {
  std::size_t epochs = 1;
  double eta0 = 0.025;
  Schedule schedule = Schedule::constant;
  bool shuffle = false;  // per-epoch seeded permutation
  std::uint64_t seed = 1;
  std::size_t report_every = 0;  // 0 disables progress callbacks

  void validate() const {
    if (epochs < 1) throw InvalidConfig("epochs must be >= 1");
    if (!(eta0 >= 0) || !std::isfinite(eta0)) throw InvalidConfig("learning rate must be >= 0");
  }
};

struct TrainReport {
  std::vector<double> epoch_mean_loss;
  std::size_t instances = 0;
  double wall_seconds = 0;
  ModelState<double> final_state;
};

struct StepBatch {
  std::vector<double> losses;
  std::size_t touched_output_rows = 0;

  double mean_loss() const {
    if (losses.empty()) return 0;
    return std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(losses.size());
  }
};

/// Called with (instances consumed so far, mean loss since the previous call).
using ProgressFn = std::function<void(std::size_t, double)>;

/// Owns one model and walks the instance stream epoch by epoch. The model
/// is only ever observed between steps.
///
/// All randomness comes from a single Rng seeded with plan.seed, consumed
/// in this order: input-vector initialization, then per epoch the shuffle
/// permutation (if enabled) followed by the negatives of each step.
class Trainer {
 public:
  Trainer(const Vocabulary& vocab, std::span<const WordId> corpus, ModelConfig config,
          TrainPlan plan)
      : config_(std::move(config)), plan_(std::move(plan)), rng_(plan_.seed), eta_(plan_.eta0) {
    config_.vocab_size = vocab.size();
    config_.eta = plan_.eta0;
    config_.validate();
    plan_.validate();
    for (WordId w : corpus)
      if (w >= vocab.size()) throw InvalidConfig("corpus id out of vocabulary range");
    instances_ = windows(corpus, config_.window, config_.arch);
    if (instances_.empty()) throw InvalidConfig("corpus yields no training instances");
    layer_ = OutputLayer::build(config_, vocab.counts());
    state_ = init_state(config_, rng_);
    order_.resize(instances_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
  }

  const ModelConfig& config() const noexcept { return config_; }
  const TrainPlan& plan() const noexcept { return plan_; }
  const ModelState<double>& state() const noexcept { return state_; }
  const OutputLayer& layer() const noexcept { return layer_; }
  const std::vector<TrainingInstance>& instances() const noexcept { return instances_; }
  std::size_t epoch() const noexcept { return epoch_; }
  std::size_t position() const noexcept { return position_; }
  std::size_t steps_done() const noexcept { return steps_done_; }
  double base_learning_rate() const noexcept { return eta_; }

  void set_learning_rate(double eta) {
    if (!(eta > 0) || !std::isfinite(eta)) throw InvalidConfig("learning rate must be > 0");
    eta_ = eta;
  }

  void set_progress(ProgressFn fn) { progress_ = std::move(fn); }

  // Learning rate applied to the next step.
  double current_learning_rate() const {
    if (plan_.schedule == Schedule::constant) return eta_;
    const double total = static_cast<double>(plan_.epochs * instances_.size());
    const double frac = 1.0 - static_cast<double>(steps_done_) / total;
    return eta_ * std::max(1e-4, frac);
  }

  /// Consumes exactly n instances, wrapping into further epochs as needed.
  StepBatch step_n(std::size_t n) {
    StepBatch batch;
    batch.losses.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (position_ == 0 && plan_.shuffle) shuffle_order();
      const double eta = current_learning_rate();
      const auto& inst = instances_[order_[position_]];
      const StepReport r = train_step(state_, config_, layer_, inst, rng_, eta);
      if (!std::isfinite(r.loss)) throw NonFiniteLoss(steps_done_, eta);
      batch.losses.push_back(r.loss);
      batch.touched_output_rows += r.touched_output_rows;
      ++steps_done_;
      report(r.loss);
      if (++position_ == instances_.size()) {
        position_ = 0;
        ++epoch_;
      }
    }
    if (!state_.input.all_finite() || !state_.output.all_finite())
      throw NonFiniteLoss(steps_done_ - 1, current_learning_rate());
    return batch;
  }

  /// Runs plan.epochs full epochs from the current position.
  TrainReport run() {
    const auto start = std::chrono::steady_clock::now();
    TrainReport report;
    for (std::size_t e = 0; e < plan_.epochs; ++e) {
      const auto batch = step_n(instances_.size() - position_);
      report.epoch_mean_loss.push_back(batch.mean_loss());
      report.instances += batch.losses.size();
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.final_state = state_;
    return report;
  }

 private:
  // Fisher-Yates with the library Rng, so orders match across platforms.
  void shuffle_order() {
    for (std::size_t i = order_.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng_.index(i));
      std::swap(order_[i - 1], order_[j]);
    }
  }

  void report(double loss) {
    if (!progress_ || plan_.report_every == 0) return;
    window_loss_ += loss;
    if (++window_count_ == plan_.report_every) {
      progress_(steps_done_, window_loss_ / static_cast<double>(window_count_));
      window_loss_ = 0;
      window_count_ = 0;
    }
  }

  ModelConfig config_;
  TrainPlan plan_;
  Rng rng_;
  double eta_;
  OutputLayer layer_;
  ModelState<double> state_;
  std::vector<TrainingInstance> instances_;
  std::vector<std::size_t> order_;
  std::size_t epoch_ = 0;
  std::size_t position_ = 0;
  std::size_t steps_done_ = 0;
  ProgressFn progress_;
  double window_loss_ = 0;
  std::size_t window_count_ = 0;
};

/// Trains a fresh model over `corpus` for plan.epochs epochs.
inline TrainReport train(const Vocabulary& vocab, std::span<const WordId> corpus,
                         const ModelConfig& config, const TrainPlan& plan,
                         ProgressFn progress = {}) {
  Trainer trainer(vocab, corpus, config, plan);
  trainer.set_progress(std::move(progress));
  return trainer.run();
}

}  // namespace wordvec
