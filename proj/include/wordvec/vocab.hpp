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
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wordvec/error.hpp"

namespace wordvec {

using WordId = std::uint32_t;

enum class Architecture { cbow, skipgram };

namespace detail {

// Decodes one UTF-8 code point starting at text[pos]; advances pos. Malformed
// bytes decode as themselves so they can never be mistaken for whitespace.
inline char32_t next_code_point(std::string_view text, std::size_t& pos) {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
  const unsigned char lead = byte(pos);
  std::size_t len = 1;
  char32_t cp = lead;
  if (lead >= 0xC0 && lead < 0xE0) {
    len = 2;
    cp = lead & 0x1F;
  } else if (lead >= 0xE0 && lead < 0xF0) {
    len = 3;
    cp = lead & 0x0F;
  } else if (lead >= 0xF0 && lead < 0xF8) {
    len = 4;
    cp = lead & 0x07;
  }
  if (len == 1 || pos + len > text.size()) {
    ++pos;
    return lead;
  }
  for (std::size_t i = 1; i < len; ++i) {
    const unsigned char b = byte(pos + i);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return lead;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  pos += len;
  return cp;
}

inline bool is_unicode_space(char32_t c) {
  return (c >= 0x09 && c <= 0x0D) || c == 0x20 || c == 0x85 || c == 0xA0 || c == 0x1680 ||
         (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F ||
         c == 0x205F || c == 0x3000;
}

}  // namespace detail

/// Splits UTF-8 text on Unicode whitespace. Newlines are ordinary whitespace.
/// Lowercasing folds ASCII letters only.
inline std::vector<std::string> tokenize(std::string_view text, bool lowercase = true) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t start = pos;
    const char32_t cp = detail::next_code_point(text, pos);
    if (detail::is_unicode_space(cp)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
      continue;
    }
    for (std::size_t i = start; i < pos; ++i) {
      char ch = text[i];
      if (lowercase && ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
      current.push_back(ch);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

/// Immutable word <-> id map with occurrence counts. Ids are assigned by
/// descending count, ties broken by first appearance in the corpus.
class Vocabulary {
 public:
  Vocabulary(std::vector<std::string> words, std::vector<std::uint64_t> counts)
      : words_(std::move(words)), counts_(std::move(counts)) {
    if (words_.size() != counts_.size())
      throw InvalidCounts("vocabulary words and counts differ in length");
    if (words_.size() < 2) throw EmptyVocabulary("vocabulary needs at least 2 distinct words");
    index_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (!index_.emplace(words_[i], static_cast<WordId>(i)).second)
        throw InvalidCounts("duplicate word in vocabulary: '" + words_[i] + "'");
    }
  }

  std::size_t size() const noexcept { return words_.size(); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  const std::string& word(WordId id) const { return words_.at(id); }

  std::uint64_t total_count() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  }

  bool contains(std::string_view token) const { return index_.count(std::string(token)) > 0; }

  WordId encode(std::string_view token) const {
    const auto it = index_.find(std::string(token));
    if (it == index_.end()) throw UnknownWord(std::string(token));
    return it->second;
  }

 private:
  std::vector<std::string> words_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, WordId> index_;
};

inline Vocabulary build_vocab(std::span<const std::string> tokens, std::uint64_t min_count = 1) {
  if (min_count < 1) throw InvalidConfig("min_count must be >= 1");
  struct Entry {
    std::string word;
    std::uint64_t count;
    std::size_t first_seen;
  };
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto [it, inserted] = slot.emplace(tokens[i], entries.size());
    if (inserted)
      entries.push_back({tokens[i], 1, i});
    else
      ++entries[it->second].count;
  }
  std::erase_if(entries, [&](const Entry& e) { return e.count < min_count; });
  if (entries.size() < 2)
    throw EmptyVocabulary("fewer than 2 distinct tokens occur at least " +
                          std::to_string(min_count) + " times");
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.count != b.count ? a.count > b.count : a.first_seen < b.first_seen;
  });
  std::vector<std::string> words;
  std::vector<std::uint64_t> counts;
  for (auto& e : entries) {
    words.push_back(std::move(e.word));
    counts.push_back(e.count);
  }
  return Vocabulary(std::move(words), std::move(counts));
}

/// Maps tokens to ids, dropping tokens absent from the vocabulary.
inline std::vector<WordId> encode_corpus(const Vocabulary& vocab, std::span<const std::string> tokens) {
  std::vector<WordId> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens)
    if (vocab.contains(t)) ids.push_back(vocab.encode(t));
  return ids;
}

/// A tokenized corpus mapped onto its own vocabulary.
struct Corpus {
  Vocabulary vocab;
  std::vector<WordId> ids;
};

inline Corpus load_corpus(std::string_view text, std::uint64_t min_count = 1,
                          bool lowercase = true) {
  const auto tokens = tokenize(text, lowercase);
  auto vocab = build_vocab(tokens, min_count);
  auto ids = encode_corpus(vocab, tokens);
  return {std::move(vocab), std::move(ids)};
}

/// One SGD example. For CBOW, `inputs` holds the context and `outputs` the
/// single center word. For skip-gram the roles are mirrored: `inputs` holds
/// the center word and `outputs` the context.
struct TrainingInstance {
  std::vector<WordId> inputs;
  std::vector<WordId> outputs;

  friend bool operator==(const TrainingInstance&, const TrainingInstance&) = default;
};

/// One instance per corpus position, using up to `window` ids on each side
/// (truncated at the corpus edges).
inline std::vector<TrainingInstance> windows(std::span<const WordId> ids, std::size_t window,
                                             Architecture arch) {
  if (window < 1) throw InvalidConfig("window must be >= 1");
  std::vector<TrainingInstance> out;
  out.reserve(ids.size());
  for (std::size_t pos = 0; pos < ids.size(); ++pos) {
    const std::size_t lo = pos >= window ? pos - window : 0;
    const std::size_t hi = std::min(ids.size() - 1, pos + window);
    std::vector<WordId> context;
    for (std::size_t j = lo; j <= hi; ++j)
      if (j != pos) context.push_back(ids[j]);
    if (context.empty()) continue;
    if (arch == Architecture::cbow)
      out.push_back({std::move(context), {ids[pos]}});
    else
      out.push_back({{ids[pos]}, std::move(context)});
  }
  return out;
}

}  // namespace wordvec
