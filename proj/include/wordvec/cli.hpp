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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wordvec/embedding_io.hpp"
#include "wordvec/http_server.hpp"
#include "wordvec/model.hpp"
#include "wordvec/trainer.hpp"
#include "wordvec/verify.hpp"
#include "wordvec/vocab.hpp"

namespace wordvec::cli {

struct TrainOptions {
  std::string input;
  std::string output;
  std::string output_vectors;  // optional, softmax/ns only
  std::string mode = "cbow";
  std::string objective = "ns";
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t negative = 5;
  double eta = 0.025;
  std::size_t epochs = 5;
  std::uint64_t seed = 1;
  std::uint64_t min_count = 1;
  bool shuffle = false;
  bool linear_decay = false;
  bool keep_case = false;
};

inline std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

inline int cmd_train(const TrainOptions& opt, std::ostream& out) {
  const auto corpus = load_corpus(read_file(opt.input), opt.min_count, !opt.keep_case);
  ModelConfig config;
  config.dim = opt.dim;
  config.arch = parse_architecture(opt.mode);
  config.objective = parse_objective(opt.objective);
  config.window = opt.window;
  config.negatives = opt.negative;
  if (!opt.output_vectors.empty() && config.objective == Objective::hs)
    throw InvalidConfig("--output-vectors needs one output vector per word (softmax or ns)");
  TrainPlan plan;
  plan.epochs = opt.epochs;
  plan.eta0 = opt.eta;
  plan.seed = opt.seed;
  plan.shuffle = opt.shuffle;
  plan.schedule = opt.linear_decay ? Schedule::linear_decay : Schedule::constant;

  Trainer trainer(corpus.vocab, corpus.ids, config, plan);
  out << "vocab " << corpus.vocab.size() << " tokens " << corpus.ids.size() << " instances "
      << trainer.instances().size() << "\n";
  for (std::size_t e = 0; e < plan.epochs; ++e) {
    const auto batch = trainer.step_n(trainer.instances().size());
    char line[96];
    std::snprintf(line, sizeof line, "epoch %zu mean_loss %.9f\n", e + 1, batch.mean_loss());
    out << line;
  }
  save_embeddings(opt.output, {corpus.vocab.words(), trainer.state().input});
  if (!opt.output_vectors.empty())
    save_embeddings(opt.output_vectors, {corpus.vocab.words(), trainer.state().output});
  return 0;
}

inline void print_neighbors(const std::vector<Neighbor>& list, std::ostream& out) {
  char buf[64];
  for (const auto& n : list) {
    std::snprintf(buf, sizeof buf, "%.6f", n.similarity);
    out << n.word << '\t' << buf << '\n';
  }
}

inline int cmd_neighbors(const std::string& vectors, const std::string& word, std::size_t k,
                         std::ostream& out) {
  print_neighbors(neighbors(load_embeddings(vectors), word, k), out);
  return 0;
}

inline int cmd_analogy(const std::string& vectors, const std::string& a, const std::string& b,
                       const std::string& c, std::size_t k, std::ostream& out) {
  print_neighbors(analogy(load_embeddings(vectors), a, b, c, k), out);
  return 0;
}

struct GradcheckOptions {
  std::vector<std::string> modes{"cbow", "sg"};
  std::vector<std::string> objectives{"softmax", "hs", "ns"};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  double threshold = 1e-6;
  double epsilon = 1e-6;
};

inline int cmd_gradcheck(const GradcheckOptions& opt, std::ostream& out) {
  verify::GradGrid grid;
  grid.archs.clear();
  grid.objectives.clear();
  for (const auto& m : opt.modes) grid.archs.push_back(parse_architecture(m));
  for (const auto& o : opt.objectives) grid.objectives.push_back(parse_objective(o));
  grid.seeds = opt.seeds;
  grid.threshold = opt.threshold;
  grid.epsilon = opt.epsilon;
  const auto reports = verify::check_all(grid);
  out << verify::format_reports(reports);
  std::size_t failed = 0;
  for (const auto& r : reports) failed += r.pass() ? 0 : 1;
  out << (failed == 0 ? "all " + std::to_string(reports.size()) + " blocks pass\n"
                      : std::to_string(failed) + " of " + std::to_string(reports.size()) +
                            " blocks FAIL\n");
  return failed == 0 ? 0 : 1;
}

inline int cmd_serve(const std::string& host, int port, std::ostream& out) {
  service::SessionService svc;
  httplib::Server server;
  service::mount(server, svc);
  out << "listening on http://" << host << ":" << port << "\n" << std::flush;
  if (!server.listen(host, port)) throw Error("cannot listen on " + host + ":" + std::to_string(port));
  return 0;
}

/// Parses argv and runs one subcommand. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Train and inspect CBOW / skip-gram word embeddings"};
  app.require_subcommand(1);

  TrainOptions topt;
  auto* train = app.add_subcommand("train", "train embeddings on a text corpus");
  train->add_option("--input", topt.input, "UTF-8 corpus file")->required()->check(CLI::ExistingFile);
  train->add_option("--output", topt.output, "input-vector embedding file to write")->required();
  train->add_option("--output-vectors", topt.output_vectors, "also write output vectors (softmax/ns)");
  train->add_option("--mode", topt.mode, "cbow|sg")->check(CLI::IsMember({"cbow", "sg", "skipgram"}));
  train->add_option("--objective", topt.objective, "softmax|hs|ns")
      ->check(CLI::IsMember({"softmax", "hs", "ns"}));
  train->add_option("--dim", topt.dim, "embedding dimension")->check(CLI::PositiveNumber);
  train->add_option("--window", topt.window, "context words on each side")->check(CLI::PositiveNumber);
  train->add_option("--negative", topt.negative, "negative samples per output word")
      ->check(CLI::PositiveNumber);
  train->add_option("--eta", topt.eta, "learning rate")->check(CLI::PositiveNumber);
  train->add_option("--epochs", topt.epochs, "passes over the corpus")->check(CLI::PositiveNumber);
  train->add_option("--seed", topt.seed, "random seed");
  train->add_option("--min-count", topt.min_count, "drop words rarer than this")
      ->check(CLI::PositiveNumber);
  train->add_flag("--shuffle", topt.shuffle, "shuffle instances each epoch");
  train->add_flag("--linear-decay", topt.linear_decay, "decay eta linearly to 1e-4 * eta");
  train->add_flag("--keep-case", topt.keep_case, "do not lowercase ASCII letters");

  std::string vectors, word, a, b, c;
  std::size_t k = 10;
  auto* nb = app.add_subcommand("neighbors", "nearest words by cosine similarity");
  nb->add_option("--vectors", vectors, "embedding file")->required()->check(CLI::ExistingFile);
  nb->add_option("--word", word, "query word")->required();
  nb->add_option("--k", k, "number of results");

  auto* an = app.add_subcommand("analogy", "nearest words to vec(b) - vec(a) + vec(c)");
  an->add_option("--vectors", vectors, "embedding file")->required()->check(CLI::ExistingFile);
  an->add_option("--a", a)->required();
  an->add_option("--b", b)->required();
  an->add_option("--c", c)->required();
  an->add_option("--k", k, "number of results");

  GradcheckOptions gopt;
  std::string gmode, gobj;
  auto* gc = app.add_subcommand("gradcheck", "compare analytic gradients with finite differences");
  gc->add_option("--mode", gmode, "restrict to cbow|sg")->check(CLI::IsMember({"cbow", "sg", "skipgram"}));
  gc->add_option("--objective", gobj, "restrict to softmax|hs|ns")
      ->check(CLI::IsMember({"softmax", "hs", "ns"}));
  gc->add_option("--seeds", gopt.seeds, "random problem seeds");
  gc->add_option("--threshold", gopt.threshold, "max relative error")->check(CLI::PositiveNumber);
  gc->add_option("--epsilon", gopt.epsilon, "finite-difference step")->check(CLI::PositiveNumber);

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "run the HTTP+JSON session API");
  serve->add_option("--host", host);
  serve->add_option("--port", port)->check(CLI::Range(1, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*train) return cmd_train(topt, out);
    if (*nb) return cmd_neighbors(vectors, word, k, out);
    if (*an) return cmd_analogy(vectors, a, b, c, k, out);
    if (*gc) {
      if (!gmode.empty()) gopt.modes = {gmode};
      if (!gobj.empty()) gopt.objectives = {gobj};
      return cmd_gradcheck(gopt, out);
    }
    if (*serve) return cmd_serve(host, port, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace wordvec::cli
