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
#include <cstdint>
#include <queue>
#include <span>
#include <tuple>
#include <vector>

#include "wordvec/error.hpp"
#include "wordvec/vocab.hpp"

namespace wordvec {

/// Root-to-leaf route of one word. `nodes[j]` is an inner-node id (a row of
/// the inner-unit matrix); `left[j]` is 1 when the walk continues to the left
/// child of that node, which is also the training label for that node.
struct PathSpec {
  std::vector<std::uint32_t> nodes;
  std::vector<std::uint8_t> left;

  std::size_t length() const noexcept { return nodes.size(); }
};

/// Binary Huffman tree over a vocabulary.
///
/// Node references use a single id space: ids below V are leaves (word ids),
/// id V + i is inner node i. Inner nodes are numbered 0..V-2 in creation
/// order, so the root is inner node V-2.
class HuffmanTree {
 public:
  struct Inner {
    std::uint32_t left;
    std::uint32_t right;
  };

  std::size_t leaf_count() const noexcept { return paths_.size(); }
  std::size_t inner_count() const noexcept { return inner_.size(); }
  std::uint32_t root() const noexcept { return static_cast<std::uint32_t>(inner_.size() - 1); }
  const Inner& inner(std::uint32_t id) const { return inner_.at(id); }
  bool is_leaf(std::uint32_t ref) const noexcept { return ref < paths_.size(); }

  const PathSpec& path(WordId word) const { return paths_.at(word); }

  std::size_t max_depth() const {
    std::size_t d = 0;
    for (const auto& p : paths_) d = std::max(d, p.length());
    return d;
  }

 private:
  friend HuffmanTree build_tree(std::span<const std::uint64_t> counts);

  std::vector<Inner> inner_;
  std::vector<PathSpec> paths_;
};

/// Repeatedly merges the two lightest nodes. Ties are broken by creation
/// order (leaves first, in id order, then inner nodes as they are made); of
/// the two merged nodes, the earlier-created one becomes the left child.
inline HuffmanTree build_tree(std::span<const std::uint64_t> counts) {
  const std::size_t v = counts.size();
  if (v < 2) throw InvalidCounts("Huffman tree needs at least 2 words");
  for (auto c : counts)
    if (c == 0) throw InvalidCounts("Huffman tree needs all counts >= 1");

  // (weight, creation order); creation order doubles as the node reference.
  using Node = std::pair<std::uint64_t, std::uint32_t>;
  std::priority_queue<Node, std::vector<Node>, std::greater<>> heap;
  for (std::uint32_t i = 0; i < v; ++i) heap.emplace(counts[i], i);

  HuffmanTree tree;
  tree.inner_.reserve(v - 1);
  std::vector<std::uint32_t> parent(2 * v - 1, 0);
  std::vector<std::uint8_t> is_left(2 * v - 1, 0);
  while (heap.size() > 1) {
    const Node a = heap.top();
    heap.pop();
    const Node b = heap.top();
    heap.pop();
    const auto [first, second] = std::minmax(a.second, b.second);
    const auto self = static_cast<std::uint32_t>(v + tree.inner_.size());
    tree.inner_.push_back({first, second});
    parent[first] = parent[second] = self;
    is_left[first] = 1;
    heap.emplace(a.first + b.first, self);
  }

  const auto root_ref = static_cast<std::uint32_t>(2 * v - 2);
  tree.paths_.resize(v);
  for (std::uint32_t w = 0; w < v; ++w) {
    PathSpec& p = tree.paths_[w];
    for (std::uint32_t ref = w; ref != root_ref; ref = parent[ref]) {
      p.nodes.push_back(static_cast<std::uint32_t>(parent[ref] - v));
      p.left.push_back(is_left[ref]);
    }
    std::reverse(p.nodes.begin(), p.nodes.end());
    std::reverse(p.left.begin(), p.left.end());
  }
  return tree;
}

}  // namespace wordvec
