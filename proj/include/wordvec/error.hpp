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

#include <stdexcept>
#include <string>

namespace wordvec {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyVocabulary : public Error {
 public:
  using Error::Error;
};

class UnknownWord : public Error {
 public:
  explicit UnknownWord(const std::string& word)
      : Error("unknown word: '" + word + "'"), word_(word) {}
  const std::string& word() const noexcept { return word_; }

 private:
  std::string word_;
};

class InvalidCounts : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class NonFiniteLoss : public Error {
 public:
  NonFiniteLoss(std::size_t instance_index, double eta)
      : Error("non-finite loss at instance " + std::to_string(instance_index) +
              " (eta=" + std::to_string(eta) + ")"),
        instance_index_(instance_index),
        eta_(eta) {}
  std::size_t instance_index() const noexcept { return instance_index_; }
  double eta() const noexcept { return eta_; }

 private:
  std::size_t instance_index_;
  double eta_;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace wordvec
