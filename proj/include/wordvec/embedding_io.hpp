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
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wordvec/error.hpp"
#include "wordvec/matrix.hpp"

namespace wordvec {

/// Words with one vector each, as stored in the text embedding format:
///
///   V N
///   word f1 f2 ... fN
///   ...
///
/// Numbers are written in shortest round-trip decimal form, so reading a
/// written file reproduces every double bit for bit.
struct Embeddings {
  std::vector<std::string> words;
  Matrix<double> vectors;

  std::size_t size() const { return words.size(); }
  std::size_t dim() const { return vectors.cols(); }

  std::size_t index_of(std::string_view word) const {
    for (std::size_t i = 0; i < words.size(); ++i)
      if (words[i] == word) return i;
    throw UnknownWord(std::string(word));
  }

  friend bool operator==(const Embeddings&, const Embeddings&) = default;
};

namespace detail {

inline void append_double(std::string& out, double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  out.append(buf, res.ptr);
}

inline double parse_double(std::string_view s, std::size_t line) {
  double x = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw FormatError("line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  return x;
}

inline std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    if (pos == line.size()) break;
    const std::size_t end = std::min(line.find(' ', pos), line.size());
    fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

}  // namespace detail

inline void write_embeddings(std::ostream& os, const Embeddings& emb) {
  std::string out = std::to_string(emb.size()) + " " + std::to_string(emb.dim()) + "\n";
  for (std::size_t i = 0; i < emb.size(); ++i) {
    out += emb.words[i];
    for (double x : emb.vectors.row(i)) {
      out += ' ';
      detail::append_double(out, x);
    }
    out += '\n';
  }
  os << out;
}

inline Embeddings read_embeddings(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("missing header line");
  const auto header = detail::split_spaces(line);
  std::size_t v = 0, n = 0;
  if (header.size() != 2 ||
      std::from_chars(header[0].data(), header[0].data() + header[0].size(), v).ec != std::errc{} ||
      std::from_chars(header[1].data(), header[1].data() + header[1].size(), n).ec != std::errc{})
    throw FormatError("header must be 'V N'");

  Embeddings emb{{}, Matrix<double>(v, n)};
  emb.words.reserve(v);
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < v; ++i) {
    if (!std::getline(is, line))
      throw FormatError("expected " + std::to_string(v) + " rows, found " + std::to_string(i));
    const auto fields = detail::split_spaces(line);
    if (fields.size() != n + 1)
      throw FormatError("line " + std::to_string(i + 2) + ": expected word and " +
                        std::to_string(n) + " numbers");
    std::string word(fields[0]);
    if (!seen.emplace(word, i).second)
      throw FormatError("line " + std::to_string(i + 2) + ": duplicate word '" + word + "'");
    for (std::size_t k = 0; k < n; ++k) emb.vectors(i, k) = detail::parse_double(fields[k + 1], i + 2);
    emb.words.push_back(std::move(word));
  }
  while (std::getline(is, line))
    if (!line.empty()) throw FormatError("trailing data after " + std::to_string(v) + " rows");
  return emb;
}

inline void save_embeddings(const std::string& path, const Embeddings& emb) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_embeddings(os, emb);
  if (!os) throw Error("failed writing '" + path + "'");
}

inline Embeddings load_embeddings(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "'");
  return read_embeddings(is);
}

// ---------------------------------------------------------------------------
// Similarity queries

struct Neighbor {
  std::string word;
  double similarity;
};

/// Cosine similarity; 0 when either vector is all zeros.
inline double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = std::sqrt(dot<double>(a, a));
  const double nb = std::sqrt(dot<double>(b, b));
  if (na == 0 || nb == 0) return 0;
  return dot<double>(a, b) / (na * nb);
}

/// The k rows most cosine-similar to `query`, skipping rows in `exclude`.
/// Ties keep file order.
inline std::vector<Neighbor> nearest(const Embeddings& emb, std::span<const double> query,
                                     std::size_t k, const std::vector<std::size_t>& exclude) {
  std::vector<Neighbor> all;
  for (std::size_t i = 0; i < emb.size(); ++i) {
    if (std::find(exclude.begin(), exclude.end(), i) != exclude.end()) continue;
    all.push_back({emb.words[i], cosine(query, emb.vectors.row(i))});
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Neighbor& a, const Neighbor& b) { return a.similarity > b.similarity; });
  all.resize(std::min(k, all.size()));
  return all;
}

inline std::vector<Neighbor> neighbors(const Embeddings& emb, std::string_view word, std::size_t k) {
  const std::size_t q = emb.index_of(word);
  return nearest(emb, emb.vectors.row(q), k, {q});
}

/// Nearest words to vec(b) - vec(a) + vec(c), excluding a, b and c.
inline std::vector<Neighbor> analogy(const Embeddings& emb, std::string_view a, std::string_view b,
                                     std::string_view c, std::size_t k) {
  const std::size_t ia = emb.index_of(a), ib = emb.index_of(b), ic = emb.index_of(c);
  std::vector<double> q(emb.dim());
  for (std::size_t i = 0; i < q.size(); ++i)
    q[i] = emb.vectors(ib, i) - emb.vectors(ia, i) + emb.vectors(ic, i);
  return nearest(emb, q, k, {ia, ib, ic});
}

}  // namespace wordvec
