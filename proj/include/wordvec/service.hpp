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
#include <cstdio>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include "json.hpp"
#include "wordvec/embedding_io.hpp"
#include "wordvec/model.hpp"
#include "wordvec/pca.hpp"
#include "wordvec/trainer.hpp"
#include "wordvec/vocab.hpp"

namespace wordvec::service {

using json = nlohmann::json;

struct Response {
  int status = 200;
  json body;
};

inline Response error_response(int status, const std::string& message) {
  return {status, json{{"error", message}}};
}

// FNV-1a over the raw bytes of both weight matrices.
inline std::string weights_hash(const ModelState<double>& s) {
  std::uint64_t h = 1469598103934665603ULL;
  const auto mix = [&](std::span<const double> data) {
    for (double x : data) {
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &x, sizeof x);
      for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
      }
    }
  };
  mix(s.input.data());
  mix(s.output.data());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline json matrix_json(const Matrix<double>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    rows.push_back(json(std::vector<double>(r.begin(), r.end())));
  }
  return rows;
}

// Non-negative integer field with a default.
inline std::size_t count_field(const json& body, const char* key, std::size_t fallback) {
  if (!body.contains(key)) return fallback;
  const auto& v = body[key];
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw InvalidConfig(std::string(key) + " must be a non-negative integer");
  return v.get<std::size_t>();
}

/// One live training run. Every member access goes through `mutex`.
struct Session {
  Session(std::string id_, Corpus corpus_, const ModelConfig& config, const TrainPlan& plan)
      : id(std::move(id_)),
        corpus(std::move(corpus_)),
        trainer(corpus.vocab, corpus.ids, config, plan) {}

  std::string id;
  Corpus corpus;
  Trainer trainer;
  std::uint64_t version = 0;
  std::mutex mutex;

  json snapshot() const {
    const auto& cfg = trainer.config();
    return {{"id", id},
            {"version", version},
            {"steps", trainer.steps_done()},
            {"epoch", trainer.epoch()},
            {"position", trainer.position()},
            {"eta", trainer.base_learning_rate()},
            {"config",
             {{"mode", std::string(to_string(cfg.arch))},
              {"objective", std::string(to_string(cfg.objective))},
              {"dim", cfg.dim},
              {"window", cfg.window},
              {"negative", cfg.negatives},
              {"vocab_size", cfg.vocab_size}}},
            {"words", corpus.vocab.words()},
            {"counts", corpus.vocab.counts()},
            {"input_vectors", matrix_json(trainer.state().input)},
            {"output_vectors", matrix_json(trainer.state().output)},
            {"hash", weights_hash(trainer.state())}};
  }
};

/// Session registry and the operations behind each HTTP endpoint. Methods
/// are safe to call concurrently; each session's operations are serialized.
class SessionService {
 public:
  // POST /sessions
  Response create(const json& body) {
    try {
      const std::string corpus_text = body.at("corpus").get<std::string>();
      ModelConfig config;
      config.dim = count_field(body, "dim", 10);
      config.arch = parse_architecture(body.value("mode", std::string("cbow")));
      config.objective = parse_objective(body.value("objective", std::string("softmax")));
      config.window = count_field(body, "window", 2);
      config.negatives = count_field(body, "negative", 5);
      TrainPlan plan;
      plan.eta0 = body.value("eta", 0.2);
      if (!(plan.eta0 > 0)) throw InvalidConfig("eta must be > 0");
      plan.seed = body.value("seed", std::uint64_t{1});
      plan.epochs = count_field(body, "epochs", 1);
      plan.shuffle = body.value("shuffle", false);
      auto corpus = load_corpus(corpus_text, count_field(body, "min_count", 1),
                                body.value("lowercase", true));
      std::string id;
      {
        std::unique_lock lock(mutex_);
        id = "s" + std::to_string(++next_id_);
      }
      auto session = std::make_shared<Session>(id, std::move(corpus), config, plan);
      json snap = session->snapshot();
      {
        std::unique_lock lock(mutex_);
        sessions_.emplace(id, std::move(session));
      }
      return {201, json{{"id", id}, {"state", std::move(snap)}}};
    } catch (const json::exception& e) {
      return error_response(400, std::string("bad request: ") + e.what());
    } catch (const Error& e) {
      return error_response(400, e.what());
    }
  }

  // POST /sessions/{id}/step {"n": int}
  Response step(const std::string& id, const json& body) {
    return with_session(id, [&](Session& s) -> Response {
      const auto n = body.value("n", 1LL);
      if (n < 1) return error_response(400, "n must be >= 1");
      const auto batch = s.trainer.step_n(static_cast<std::size_t>(n));
      ++s.version;
      return {200, json{{"version", s.version},
                        {"steps", s.trainer.steps_done()},
                        {"epoch", s.trainer.epoch()},
                        {"mean_loss", batch.mean_loss()},
                        {"losses", batch.losses},
                        {"touched_output_rows", batch.touched_output_rows}}};
    });
  }

  // POST /sessions/{id}/activate {"ids": [int]}
  Response activate(const std::string& id, const json& body) {
    return with_session(id, [&](Session& s) -> Response {
      if (!body.contains("ids") || !body["ids"].is_array() || body["ids"].empty())
        return error_response(400, "ids must be a non-empty array of word ids");
      const auto& cfg = s.trainer.config();
      std::vector<WordId> ids;
      for (const auto& v : body["ids"]) {
        if (!v.is_number_integer()) return error_response(400, "ids must be integers");
        const auto x = v.get<long long>();
        if (x < 0 || static_cast<std::size_t>(x) >= cfg.vocab_size)
          return error_response(400, "word id " + std::to_string(x) + " out of range");
        ids.push_back(static_cast<WordId>(x));
      }
      const auto& state = s.trainer.state();
      const auto h = hidden(state, std::span<const WordId>(ids));
      json out{{"version", s.version}, {"h", h}};
      std::vector<double> per_word(cfg.vocab_size);
      switch (cfg.objective) {
        case Objective::softmax: {
          const auto fwd = softmax_forward<double>(state, h);
          out["scores"] = fwd.scores;
          per_word = fwd.probs;
          break;
        }
        case Objective::ns:
          for (std::size_t w = 0; w < cfg.vocab_size; ++w)
            per_word[w] = sigmoid(dot<double>(state.output.row(w), h));
          break;
        case Objective::hs: {
          const auto& tree = *s.trainer.layer().tree;
          for (std::size_t w = 0; w < cfg.vocab_size; ++w)
            per_word[w] = std::exp(-hs_loss<double>(state, tree.path(static_cast<WordId>(w)), h));
          std::vector<double> left(state.output.rows());
          for (std::size_t n = 0; n < left.size(); ++n) left[n] = sigmoid(dot<double>(state.output.row(n), h));
          out["inner_left_probs"] = left;
          break;
        }
      }
      out["outputs"] = per_word;
      return {200, std::move(out)};
    });
  }

  // GET /sessions/{id}/state?version=
  Response state(const std::string& id, std::optional<std::uint64_t> known_version = {}) {
    return with_session(id, [&](Session& s) -> Response {
      if (known_version && *known_version == s.version)
        return {200, json{{"id", s.id}, {"version", s.version}, {"changed", false}}};
      json snap = s.snapshot();
      snap["changed"] = true;
      return {200, std::move(snap)};
    });
  }

  // GET /sessions/{id}/pca
  Response pca(const std::string& id, PcaBasis basis = PcaBasis::both) {
    return with_session(id, [&](Session& s) -> Response {
      const auto proj = pca_project(s.trainer.state(), basis);
      const auto& words = s.corpus.vocab.words();
      const bool inner = s.trainer.config().objective == Objective::hs;
      json in = json::array(), out = json::array();
      for (std::size_t i = 0; i < proj.input.size(); ++i)
        in.push_back({{"label", words[i]}, {"x", proj.input[i][0]}, {"y", proj.input[i][1]}});
      for (std::size_t i = 0; i < proj.output.size(); ++i)
        out.push_back({{"label", inner ? "node" + std::to_string(i) : words[i]},
                       {"x", proj.output[i][0]},
                       {"y", proj.output[i][1]}});
      return {200, json{{"version", s.version},
                        {"basis", basis == PcaBasis::both ? "both" : "input"},
                        {"input", std::move(in)},
                        {"output", std::move(out)},
                        {"explained_variance", {proj.explained_variance[0], proj.explained_variance[1]}}}};
    });
  }

  // POST /sessions/{id}/eta {"eta": real}
  Response set_learning_rate(const std::string& id, const json& body) {
    return with_session(id, [&](Session& s) -> Response {
      if (!body.contains("eta") || !body["eta"].is_number())
        return error_response(400, "eta must be a number");
      const double eta = body["eta"].get<double>();
      if (!(eta > 0) || !std::isfinite(eta)) return error_response(400, "eta must be > 0");
      s.trainer.set_learning_rate(eta);
      return {200, json{{"eta", eta}, {"version", s.version}}};
    });
  }

  // GET /sessions/{id}/neighbors?word=&k=
  Response neighbors(const std::string& id, const std::string& word, std::size_t k) {
    return with_session(id, [&](Session& s) -> Response {
      const Embeddings emb{s.corpus.vocab.words(), s.trainer.state().input};
      json list = json::array();
      for (const auto& nb : wordvec::neighbors(emb, word, k))
        list.push_back({{"word", nb.word}, {"similarity", nb.similarity}});
      return {200, json{{"word", word}, {"neighbors", std::move(list)}}};
    });
  }

  // DELETE /sessions/{id}
  Response remove(const std::string& id) {
    std::unique_lock lock(mutex_);
    if (sessions_.erase(id) == 0) return error_response(404, "unknown session '" + id + "'");
    return {200, json{{"deleted", id}}};
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return sessions_.size();
  }

 private:
  std::shared_ptr<Session> find(const std::string& id) const {
    std::shared_lock lock(mutex_);
    const auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  template <typename Fn>
  Response with_session(const std::string& id, Fn&& fn) {
    const auto session = find(id);
    if (!session) return error_response(404, "unknown session '" + id + "'");
    std::lock_guard lock(session->mutex);
    try {
      return fn(*session);
    } catch (const UnknownWord& e) {
      return error_response(400, e.what());
    } catch (const json::exception& e) {
      return error_response(400, std::string("bad request: ") + e.what());
    } catch (const NonFiniteLoss& e) {
      return error_response(500, e.what());
    } catch (const Error& e) {
      return error_response(400, e.what());
    }
  }

  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 0;
};

}  // namespace wordvec::service
