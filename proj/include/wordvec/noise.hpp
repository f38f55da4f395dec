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

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "wordvec/error.hpp"
#include "wordvec/rng.hpp"
#include "wordvec/vocab.hpp"

namespace wordvec {

/// Noise distribution for negative sampling, P(w) proportional to
/// count(w)^power, with a Walker/Vose alias table for O(1) draws.
class NoiseDistribution {
 public:
  NoiseDistribution(std::span<const std::uint64_t> counts, double power = 0.75) {
    const std::size_t n = counts.size();
    if (n < 2) throw InvalidCounts("noise distribution needs at least 2 words");
    probs_.resize(n);
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (counts[i] == 0) throw InvalidCounts("noise distribution needs all counts >= 1");
      probs_[i] = std::pow(static_cast<double>(counts[i]), power);
      total += probs_[i];
    }
    for (auto& p : probs_) p /= total;
    build_alias();
  }

  std::size_t size() const noexcept { return probs_.size(); }
  const std::vector<double>& probs() const noexcept { return probs_; }
  const std::vector<double>& accept() const noexcept { return accept_; }
  const std::vector<std::uint32_t>& alias() const noexcept { return alias_; }

  WordId sample(Rng& rng) const {
    const auto column = static_cast<std::size_t>(rng.index(probs_.size()));
    return rng.uniform01() < accept_[column] ? static_cast<WordId>(column) : alias_[column];
  }

  // Total probability mass the alias table assigns to each word.
  std::vector<double> table_mass() const {
    const double n = static_cast<double>(probs_.size());
    std::vector<double> mass(probs_.size(), 0.0);
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      mass[i] += accept_[i] / n;
      mass[alias_[i]] += (1.0 - accept_[i]) / n;
    }
    return mass;
  }

 private:
  void build_alias() {
    const std::size_t n = probs_.size();
    accept_.assign(n, 1.0);
    alias_.resize(n);
    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      alias_[i] = static_cast<std::uint32_t>(i);
      scaled[i] = probs_[i] * static_cast<double>(n);
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      const std::uint32_t s = small.back();
      small.pop_back();
      const std::uint32_t l = large.back();
      accept_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    // Leftovers are 1 up to rounding.
    for (auto i : small) accept_[i] = 1.0;
    for (auto i : large) accept_[i] = 1.0;
  }

  std::vector<double> probs_;
  std::vector<double> accept_;
  std::vector<std::uint32_t> alias_;
};

inline NoiseDistribution build_noise(std::span<const std::uint64_t> counts, double power = 0.75) {
  return NoiseDistribution(counts, power);
}

/// Draws k words from the noise distribution, redrawing any draw equal to
/// `exclude`. Duplicates among the returned words are allowed. Pass an id
/// >= V to disable exclusion.
inline std::vector<WordId> sample_negatives(const NoiseDistribution& dist, std::size_t k,
                                            WordId exclude, Rng& rng) {
  std::vector<WordId> out;
  out.reserve(k);
  while (out.size() < k) {
    const WordId w = dist.sample(rng);
    if (w != exclude) out.push_back(w);
  }
  return out;
}

}  // namespace wordvec
