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


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <bit>
#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <unistd.h>

#include "optimal_code.hpp"
#include "wordvec/embedding_io.hpp"
#include "wordvec/huffman.hpp"
#include "wordvec/model.hpp"
#include "wordvec/noise.hpp"
#include "wordvec/trainer.hpp"
#include "wordvec/verify.hpp"
#include "wordvec/vocab.hpp"

namespace {

using namespace wordvec;
namespace fs = std::filesystem;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const Architecture kArchs[] = {Architecture::cbow, Architecture::skipgram};
const Objective kObjectives[] = {Objective::softmax, Objective::hs, Objective::ns};

std::string combo(Architecture a, Objective o) {
  return std::string(to_string(a)) + "/" + std::string(to_string(o));
}

// ---------------------------------------------------------------------------

Outcome gradient_certification() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto reports = verify::check_all(verify::GradGrid{});
  const double elapsed = seconds_since(t0);
  double worst = 0;
  std::size_t failed = 0;
  for (const auto& r : reports) {
    worst = std::max(worst, r.max_rel_error);
    if (!r.pass()) ++failed;
  }
  const bool ok = reports.size() == 12 && failed == 0 && elapsed < 60;
  return {ok, fmt("%zu blocks, %zu failing, max rel err %.2e, %.2f s", reports.size(), failed, worst,
                  elapsed)};
}

Outcome hs_normalization() {
  Rng rng(2024);
  double worst = 0;
  for (std::size_t v : {2u, 5u, 17u, 64u}) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::uint64_t> counts(v);
      for (auto& c : counts) c = 1 + rng.index(1000);
      const auto tree = build_tree(counts);
      const std::size_t n = 1 + rng.index(8);
      ModelState<double> s{Matrix<double>(v, n), Matrix<double>(v - 1, n)};
      for (auto& x : s.output.data()) x = rng.uniform(-2, 2);
      std::vector<double> h(n);
      for (auto& x : h) x = rng.uniform(-2, 2);
      double total = 0;
      for (WordId w = 0; w < v; ++w) total += std::exp(-hs_loss<double>(s, tree.path(w), h));
      worst = std::max(worst, std::abs(total - 1));
    }
  }
  return {worst <= 1e-10, fmt("V in {2,5,17,64}, 80 trials, max |sum p - 1| = %.2e", worst)};
}

Outcome huffman_structure() {
  Rng rng(77);
  std::size_t bad_inner = 0, bad_cost = 0, brute = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t v = 2 + rng.index(trial < 60 ? 7 : 63);
    std::vector<std::uint64_t> counts(v);
    for (auto& c : counts) c = 1 + rng.index(trial % 3 == 0 ? 4 : 500);
    const auto tree = build_tree(counts);
    if (tree.inner_count() != v - 1) ++bad_inner;
    if (v <= 8) {
      ++brute;
      std::uint64_t cost = 0;
      for (WordId w = 0; w < v; ++w) cost += counts[w] * tree.path(w).length();
      if (cost != oracle::optimal_code_cost(counts)) ++bad_cost;
    }
  }
  return {bad_inner == 0 && bad_cost == 0 && brute > 0,
          fmt("100 count vectors: %zu wrong inner counts; %zu of %zu (V<=8) off brute-force optimum",
              bad_inner, bad_cost, brute)};
}

Outcome update_cost() {
  std::size_t checked = 0, mismatched = 0;
  std::string first_bad;
  Rng rng(5);
  for (std::size_t v : {8u, 20u, 64u}) {
    const std::vector<std::uint64_t> counts(v, 10);
    const auto depth_bound = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(v)))) + 1;
    for (auto arch : kArchs) {
      for (auto obj : kObjectives) {
        ModelConfig config;
        config.vocab_size = v;
        config.dim = 5;
        config.arch = arch;
        config.objective = obj;
        config.negatives = 5;
        const auto layer = OutputLayer::build(config, counts);
        auto state = init_state(config, rng);
        for (std::size_t c = 1; c <= 4; ++c) {
          std::vector<WordId> ctx(c);
          for (auto& w : ctx) w = static_cast<WordId>(rng.index(v));
          const auto center = static_cast<WordId>(rng.index(v));
          const TrainingInstance inst =
              arch == Architecture::cbow ? TrainingInstance{ctx, {center}} : TrainingInstance{{center}, ctx};
          const auto r = train_step(state, config, layer, inst, rng);
          std::size_t expected = 0;
          bool within_bound = true;
          switch (obj) {
            case Objective::softmax:
              // All V output vectors are written once per step; skip-gram
              // folds the C error vectors into one summed error first.
              expected = v;
              break;
            case Objective::hs:
              for (WordId w : inst.outputs) {
                expected += layer.tree->path(w).length();
                within_bound = within_bound && layer.tree->path(w).length() <= depth_bound;
              }
              break;
            case Objective::ns:
              expected = inst.outputs.size() * (config.negatives + 1);
              break;
          }
          ++checked;
          if (r.touched_output_rows != expected || !within_bound) {
            ++mismatched;
            if (first_bad.empty())
              first_bad = fmt(" (first: V=%zu %s C=%zu got %zu want %zu)", v, combo(arch, obj).c_str(), c,
                              r.touched_output_rows, expected);
          }
        }
      }
    }
  }
  return {mismatched == 0, fmt("%zu steps instrumented, %zu mismatches", checked, mismatched) + first_bad};
}

Outcome noise_distribution() {
  const auto skew = build_noise(std::vector<std::uint64_t>{16, 1});
  const bool exact = skew.probs()[0] == 8.0 / 9.0 && skew.probs()[1] == 1.0 / 9.0;

  std::vector<std::uint64_t> zipf(20);
  for (std::size_t r = 0; r < 20; ++r) zipf[r] = static_cast<std::uint64_t>(std::llround(1000.0 / (r + 1)));
  const auto d = build_noise(zipf);
  Rng rng(31337);
  const std::size_t n = 100000;
  std::vector<std::size_t> observed(20, 0);
  for (WordId w : sample_negatives(d, n, 20, rng)) ++observed[w];
  double stat = 0;
  for (std::size_t i = 0; i < 20; ++i) {
    const double expected = static_cast<double>(n) * d.probs()[i];
    stat += (static_cast<double>(observed[i]) - expected) * (static_cast<double>(observed[i]) - expected) / expected;
  }
  const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(19.0), stat));
  return {exact && p > 0.001, fmt("[16,1] -> [%.17g, %.17g] %s; 20-word Zipf chi2 = %.2f, p = %.4f",
                                  skew.probs()[0], skew.probs()[1], exact ? "exact" : "NOT exact", stat, p)};
}

Outcome training_sanity() {
  std::string text;
  for (int i = 0; i < 8; ++i) text += "a b c d e f g h i j k l m n o p q r s t u v w x y z ";
  const auto corpus = load_corpus(text, 1);
  const double ln2 = std::log(2.0);
  std::string detail;
  bool ok = true;
  for (auto arch : kArchs) {
    for (auto obj : kObjectives) {
      ModelConfig config;
      config.dim = 10;
      config.arch = arch;
      config.objective = obj;
      config.window = 2;
      config.negatives = 5;
      TrainPlan plan;
      plan.epochs = 10;
      plan.eta0 = 0.05;
      plan.seed = 1;
      Trainer trainer(corpus.vocab, corpus.ids, config, plan);
      const auto& first = trainer.instances().front();
      double closed_form = 0;
      for (WordId w : first.outputs) {
        if (obj == Objective::softmax) closed_form += std::log(static_cast<double>(corpus.vocab.size()));
        if (obj == Objective::hs) closed_form += static_cast<double>(trainer.layer().tree->path(w).length()) * ln2;
        if (obj == Objective::ns) closed_form += static_cast<double>(config.negatives + 1) * ln2;
      }
      const auto batch = trainer.step_n(1);
      const double init_err = std::abs(batch.losses[0] - closed_form);

      std::vector<double> means(1);
      // Finish epoch 1, then nine more.
      const auto rest = trainer.step_n(trainer.instances().size() - 1);
      means[0] = (batch.losses[0] + rest.mean_loss() * static_cast<double>(rest.losses.size())) /
                 static_cast<double>(trainer.instances().size());
      for (int e = 1; e < 10; ++e) means.push_back(trainer.step_n(trainer.instances().size()).mean_loss());
      std::size_t decreasing = 0;
      for (std::size_t e = 1; e < means.size(); ++e) decreasing += means[e] < means[e - 1];
      const bool combo_ok = decreasing >= 9 && init_err <= 1e-12;
      ok = ok && combo_ok;
      detail += fmt(" %s:%zu/9,%.0e", combo(arch, obj).c_str(), decreasing, init_err);
    }
  }
  return {ok, "decreasing transitions, initial-loss error per combo:" + detail};
}

std::string slurp(const std::string& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome cli_determinism(const fs::path& dir) {
  const std::string corpus = std::string(WORDVEC_DATA_DIR) + "/analogy.txt";
  std::size_t identical = 0, runs = 0;
  for (const char* flags : {"--mode cbow --objective ns", "--mode sg --objective hs --shuffle",
                            "--mode sg --objective softmax --linear-decay"}) {
    std::string outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      outputs[rep] = (dir / ("det" + std::to_string(runs) + "_" + std::to_string(rep) + ".vec")).string();
      const std::string cmd = std::string(WORDVEC_CLI) + " train --input " + corpus + " --output " +
                              outputs[rep] + " " + flags +
                              " --dim 10 --window 2 --negative 5 --eta 0.05 --epochs 20 --seed 7 --min-count 1"
                              " > /dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, std::string("cli failed: ") + cmd};
    }
    ++runs;
    const auto a = slurp(outputs[0]);
    if (!a.empty() && a == slurp(outputs[1])) ++identical;
  }
  return {identical == runs, fmt("%zu of %zu configurations byte-identical across two CLI runs", identical, runs)};
}

Outcome analogy_reproduction() {
  const auto t0 = std::chrono::steady_clock::now();
  std::ifstream is(std::string(WORDVEC_DATA_DIR) + "/analogy.txt");
  std::stringstream ss;
  ss << is.rdbuf();
  const auto corpus = load_corpus(ss.str(), 1);
  ModelConfig config;
  config.dim = 10;
  config.arch = Architecture::skipgram;
  config.objective = Objective::ns;
  config.window = 2;
  config.negatives = 5;
  std::size_t hits = 0;
  std::string ranks;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    TrainPlan plan;
    plan.epochs = 200;
    plan.eta0 = 0.025;
    plan.seed = seed;
    const auto report = train(corpus.vocab, corpus.ids, config, plan);
    const Embeddings emb{corpus.vocab.words(), report.final_state.input};
    const auto top = analogy(emb, "king", "queen", "man", 2);
    const bool hit = std::any_of(top.begin(), top.end(), [](const Neighbor& n) { return n.word == "woman"; });
    hits += hit;
    ranks += hit ? "+" : "-";
  }
  const double elapsed = seconds_since(t0);
  return {hits >= 7 && elapsed < 120,
          fmt("V=%zu, 'woman' in top-2 of queen - king + man for %zu/10 seeds [%s], %.2f s",
              corpus.vocab.size(), hits, ranks.c_str(), elapsed)};
}

Outcome round_trip(const fs::path& dir) {
  const auto corpus = load_corpus(
      "a b c d e f a b c a b a quick check of shortest round trip decimal output a c e", 1);
  ModelConfig config;
  config.dim = 16;
  config.objective = Objective::hs;
  TrainPlan plan;
  plan.epochs = 3;
  plan.eta0 = 0.1;
  const auto trained = train(corpus.vocab, corpus.ids, config, plan).final_state;
  const std::string file = (dir / "roundtrip.vec").string();
  std::size_t mismatched = 0, total = 0;

  const Embeddings emb{corpus.vocab.words(), trained.input};
  save_embeddings(file, emb);
  const auto back = load_embeddings(file);
  if (back.words != emb.words) return {false, "word list changed"};
  for (std::size_t i = 0; i < emb.vectors.data().size(); ++i, ++total)
    mismatched += std::bit_cast<std::uint64_t>(back.vectors.data()[i]) !=
                  std::bit_cast<std::uint64_t>(emb.vectors.data()[i]);

  Rng rng(8);
  Embeddings random{{}, Matrix<double>(50, 20)};
  for (std::size_t i = 0; i < 50; ++i) random.words.push_back("w" + std::to_string(i));
  for (auto& x : random.vectors.data()) {
    do x = std::bit_cast<double>(rng.next()); while (!std::isfinite(x));
  }
  save_embeddings(file, random);
  const auto back2 = load_embeddings(file);
  for (std::size_t i = 0; i < random.vectors.data().size(); ++i, ++total)
    mismatched += std::bit_cast<std::uint64_t>(back2.vectors.data()[i]) !=
                  std::bit_cast<std::uint64_t>(random.vectors.data()[i]);
  return {mismatched == 0, fmt("%zu doubles written and read back, %zu differ in any bit", total, mismatched)};
}

}  // namespace

int main() {
  const fs::path dir = fs::temp_directory_path() / ("wordvec_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"gradient-certification", gradient_certification},
      {"hs-normalization", hs_normalization},
      {"huffman-structure", huffman_structure},
      {"update-cost", update_cost},
      {"noise-distribution", noise_distribution},
      {"training-sanity", training_sanity},
      {"cli-determinism", [&] { return cli_determinism(dir); }},
      {"analogy-reproduction", analogy_reproduction},
      {"embedding-round-trip", [&] { return round_trip(dir); }},
  };

  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  fs::remove_all(dir);
  std::printf("%d of %zu criteria failed\n", failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
