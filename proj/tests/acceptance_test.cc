// Copyright 2026 The tagprobe Authors.
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

// Acceptance suite: one PASS or FAIL line per criterion. Exits non-zero if
// any criterion fails. `--only 1,5` restricts the run to listed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cli.h"
#include "oracles.h"
#include "tagprobe/conllu.h"
#include "tagprobe/decoder.h"
#include "tagprobe/embeddings.h"
#include "tagprobe/error_analysis.h"
#include "tagprobe/error_set.h"
#include "tagprobe/evaluation.h"
#include "tagprobe/experiment.h"
#include "tagprobe/model.h"
#include "tagprobe/probe.h"
#include "tagprobe/tag_masking.h"
#include "tagprobe/toy_treebank.h"
#include "tagprobe/trainer.h"
#include "test_support.h"

namespace tagprobe {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Field-identical round trip over the shipped CoNLL-U suite.
Outcome ConlluRoundTrip() {
  const auto start = Clock::now();
  int files = 0;
  std::size_t sentences = 0;
  for (const auto& entry : fs::directory_iterator(testing::TestDataPath("conllu"))) {
    if (entry.path().extension() != ".conllu") continue;
    ++files;
    Treebank first = ReadConlluFile(entry.path(), Split::kTrain, "suite");
    Treebank second = ParseConlluString(WriteConllu(first), Split::kTrain, "suite");
    if (first.sentences != second.sentences) {
      return {false, "mismatch in " + entry.path().filename().string()};
    }
    sentences += first.size();
  }
  const double elapsed = Seconds(start);
  if (files != 20) return {false, fmt::format("expected 20 fixture files, found {}", files)};
  return {elapsed < 1.0, fmt::format("20 files, {} sentences, {:.3f} s", sentences, elapsed)};
}

Outcome PcaOracle() {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal;
  double worst_variance = 0.0, worst_error = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = std::uniform_int_distribution<int>(3, 16)(rng);
    const int k = std::uniform_int_distribution<int>(1, d - 1)(rng);
    const int n = std::uniform_int_distribution<int>(d + 2, 80)(rng);
    Eigen::MatrixXd data(n, d);
    for (Eigen::Index i = 0; i < data.size(); ++i) data.data()[i] = normal(rng) * (1 + i % d);
    PcaProjection pca = FitPca(data, k);
    testing::PcaOracle oracle = testing::PcaByCovariance(data, k);
    if (pca.explained_variance.size() != k) return {false, "wrong number of components"};
    worst_variance = std::max(
        worst_variance, (pca.explained_variance - oracle.explained_variance).cwiseAbs().maxCoeff());
    Eigen::MatrixXd centered = data.rowwise() - pca.mean.transpose();
    Eigen::MatrixXd residual = centered - centered * pca.components * pca.components.transpose();
    worst_error = std::max(worst_error,
                           std::abs(residual.squaredNorm() / (n * d) - oracle.reconstruction_error));
  }
  return {worst_variance < 1e-8 && worst_error < 1e-8,
          fmt::format("50 matrices, max variance diff {:.2e}, max reconstruction diff {:.2e}",
                      worst_variance, worst_error)};
}

nn::Matrix RandomScores(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal(0.0, 3.0);
  nn::Matrix s(n, n + 1);
  for (Eigen::Index i = 0; i < s.size(); ++i) s.data()[i] = normal(rng);
  return s;
}

Outcome DecoderOracle() {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    nn::Matrix scores = RandomScores(rng, 4);
    std::vector<int> heads = MaxSpanningArborescence(scores);
    if (!IsSpanningArborescence(heads)) return {false, "invalid tree on a 4-token matrix"};
    const double best = testing::BruteForceBestTreeScore(scores);
    if (TreeScore(scores, heads) != best) {
      return {false, fmt::format("trial {}: {} vs brute force {}", trial,
                                 TreeScore(scores, heads), best)};
    }
  }
  std::uniform_int_distribution<int> size(1, 12);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = size(rng);
    std::vector<int> heads = MaxSpanningArborescence(RandomScores(rng, n));
    if (heads.size() != static_cast<std::size_t>(n) || !IsSpanningArborescence(heads)) {
      return {false, fmt::format("invalid tree for n = {}", n)};
    }
  }
  return {true, "200 exact matches on 4 tokens (125 trees each), 1000 valid trees n <= 12"};
}

Outcome FreezeInvariant() {
  std::mt19937_64 rng(5);
  Treebank train = testing::RandomTreebank(rng, 47, 9);
  Treebank eval = testing::RandomTreebank(rng, 10, 9);
  EncoderConfig encoder = testing::TinyEncoder();
  TrainConfig config;
  config.max_epochs = 2;
  config.patience = 1;
  ModelState parser = Train(InitializeModel(encoder, HeadKind::kParser, Vocabulary::Build(train),
                                            nullptr, 3),
                             train, eval, config)
                          .state;
  const std::int64_t expected_steps = (static_cast<std::int64_t>(train.size()) + 29) / 30;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    config.seed = seed;
    ProbeResult probe = ProbeAsTagger(parser, train, eval, config);
    if (!probe.report.encoder_unchanged()) return {false, fmt::format("seed {}: checksum changed", seed)};
    for (GroupId g : {kEmbeddingGroup, kCharEncoderGroup, kBilstmGroup}) {
      const auto& before = parser.group(g).parameters;
      const auto& after = probe.probe.group(g).parameters;
      for (std::size_t p = 0; p < before.size(); ++p) {
        if (before[p].value.size() != after[p].value.size() ||
            std::memcmp(before[p].value.data(), after[p].value.data(),
                        sizeof(double) * before[p].value.size()) != 0) {
          return {false, fmt::format("seed {}: {} changed", seed, before[p].name)};
        }
      }
    }
    if (probe.report.steps != expected_steps) {
      return {false, fmt::format("seed {}: {} steps, expected {}", seed, probe.report.steps,
                                 expected_steps)};
    }
  }
  return {true, fmt::format("10 seeds bit-identical, {} steps for {} sentences", expected_steps,
                            train.size())};
}

Outcome SurprisalOracle() {
  if (Surprisal(1.0) != 0.0 || Surprisal(0.25) != 2.0) return {false, "spot values"};
  std::mt19937_64 rng(99);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int tags = std::uniform_int_distribution<int>(3, 17)(rng);
    Treebank train = testing::RandomTreebank(rng, 20, 10, tags, 5, 25);
    Treebank target = testing::RandomTreebank(rng, 8, 10, tags, 5, 25);
    ErrorSet errors = CollectErrors(testing::RandomPredictions(rng, target, 0.3), target);
    const SurprisalStats bigram = BigramSurprisal(train, target, errors);
    const SurprisalStats head = HeadRelSurprisal(train, target, errors);
    const testing::OracleSurprisal bigram_oracle =
        testing::BigramSurprisalOracle(train, target, errors);
    const testing::OracleSurprisal head_oracle =
        testing::HeadRelSurprisalOracle(train, target, errors);
    for (double diff : {bigram.mean_all - bigram_oracle.mean_all,
                        bigram.mean_errors - bigram_oracle.mean_errors,
                        head.mean_all - head_oracle.mean_all,
                        head.mean_errors - head_oracle.mean_errors}) {
      worst = std::max(worst, std::abs(diff));
    }
  }
  return {worst <= 1e-9, fmt::format("100 corpora, max diff {:.2e}; I(1) = 0, I(0.25) = 2", worst)};
}

TagInput DefinitionalTag(SchemeKind scheme, Upos gold, Upos predicted, bool tagger_error,
                         bool probe_error) {
  switch (scheme) {
    case SchemeKind::kPred: return predicted;
    case SchemeKind::kMaskAllButTaggerErrors: return tagger_error ? TagInput(gold) : std::nullopt;
    case SchemeKind::kMaskAllButProbeErrors: return probe_error ? TagInput(gold) : std::nullopt;
    case SchemeKind::kMaskTaggerErrors: return tagger_error ? std::nullopt : TagInput(predicted);
    case SchemeKind::kGold: return gold;
    case SchemeKind::kNone: break;
  }
  return std::nullopt;
}

Outcome ErrorAlgebra() {
  std::mt19937_64 rng(31);
  std::size_t clean_sentences = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Treebank gold = testing::RandomTreebank(rng, 4, 8);
    const double rate = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    auto pred_a = testing::RandomPredictions(rng, gold, rate);
    auto pred_b = testing::RandomPredictions(rng, gold, rate);
    ErrorSet a = CollectErrors(pred_a, gold);
    ErrorSet b = CollectErrors(pred_b, gold);
    Crossover c = ComputeCrossover(a, b);
    std::set<std::pair<int, int>> sa, sb, all;
    for (const ErrorRecord& r : a.records()) sa.insert({r.sentence_index, r.token_index});
    for (const ErrorRecord& r : b.records()) sb.insert({r.sentence_index, r.token_index});
    all = sa;
    all.insert(sb.begin(), sb.end());
    std::size_t both = 0;
    for (const auto& p : sa) both += sb.count(p);
    if (c.union_size != a.size() + b.size() - c.both || c.union_size != all.size() ||
        c.both != both || c.only_a != sa.size() - both || c.only_b != sb.size() - both) {
      return {false, fmt::format("trial {}: crossover counts disagree", trial)};
    }
    const auto gold_tags = GoldTags(gold);
    for (SchemeKind scheme : AllSchemes()) {
      TagConditioning conditioning = BuildConditioning(
          scheme, gold, &pred_a, scheme == SchemeKind::kMaskAllButProbeErrors ? &b : &a);
      if (scheme == SchemeKind::kNone) {
        if (conditioning.tags) return {false, "NONE produced tag inputs"};
        continue;
      }
      const TagInputs& tags = *conditioning.tags;
      for (std::size_t s = 0; s < gold.size(); ++s) {
        bool clean = true;
        for (std::size_t i = 0; i < gold.sentences[s].size(); ++i) {
          const std::pair<int, int> pos{static_cast<int>(s), static_cast<int>(i) + 1};
          clean = clean && !sa.count(pos);
          if (tags[s][i] != DefinitionalTag(scheme, gold_tags[s][i], pred_a[s][i],
                                            sa.count(pos) > 0, sb.count(pos) > 0)) {
            return {false, fmt::format("trial {}: {} differs from its definition", trial,
                                       SchemeName(scheme))};
          }
        }
        if (clean && scheme == SchemeKind::kMaskTaggerErrors) {
          ++clean_sentences;
          if (tags[s] != TagSequence(pred_a[s].begin(), pred_a[s].end())) {
            return {false, "zero-error sentence differs from PRED"};
          }
        }
      }
    }
  }
  return {true, fmt::format("1000 fixtures, all six schemes, {} zero-error sentences",
                            clean_sentences)};
}

Outcome MetricOracles() {
  // Hand case: three gold X tokens, two predicted X, one of them correct.
  Treebank hand = ParseConlluString(
      "1\ta\t_\tX\t_\t_\t0\troot\t_\t_\n2\tb\t_\tX\t_\t_\t1\tdep\t_\t_\n"
      "3\tc\t_\tX\t_\t_\t1\tdep\t_\t_\n4\td\t_\tNOUN\t_\t_\t1\tdep\t_\t_\n\n");
  std::optional<TagScore> x = PerTagF1({{Upos::kX, Upos::kNoun, Upos::kVerb, Upos::kX}}, hand)
                                  .Get(Upos::kX);
  if (!x || std::abs(x->f1 - 0.4) > 1e-12) return {false, "hand case F1 is not 0.4"};

  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 500; ++trial) {
    Treebank gold = testing::RandomTreebank(rng, 5, 10);
    auto predicted = testing::RandomPredictions(rng, gold, 0.35);
    TagScores scores = PerTagF1(predicted, gold);
    std::vector<double> oracle = testing::PerTagF1Oracle(predicted, gold);
    for (int t = 0; t < kNumUpos; ++t) {
      std::optional<TagScore> got = scores.Get(static_cast<Upos>(t));
      const double want = oracle[t];
      if (got.has_value() != (want >= 0.0) || (got && got->f1 != want)) {
        return {false, fmt::format("trial {}: F1 of {} differs", trial,
                                   UposName(static_cast<Upos>(t)))};
      }
    }
    if (TaggingAccuracy(predicted, gold) != testing::AccuracyOracle(predicted, gold)) {
      return {false, fmt::format("trial {}: accuracy differs", trial)};
    }
    std::vector<PredictedTree> trees;
    for (const Sentence& s : gold.sentences) {
      PredictedTree tree;
      const int n = static_cast<int>(s.size());
      for (const Token& t : s.tokens) {
        PredictedArc arc{t.head, t.deprel};
        if (std::bernoulli_distribution(0.3)(rng)) {
          arc.head = std::uniform_int_distribution<int>(0, n)(rng);
        }
        if (std::bernoulli_distribution(0.3)(rng)) {
          arc.deprel = s.tokens[std::uniform_int_distribution<int>(0, n - 1)(rng)].deprel;
        }
        tree.push_back(arc);
      }
      trees.push_back(std::move(tree));
    }
    ParseScore parse = AttachmentScores(trees, gold);
    auto [uas, las] = testing::AttachmentOracle(trees, gold);
    if (parse.uas != uas || parse.las != las) {
      return {false, fmt::format("trial {}: attachment scores differ", trial)};
    }
  }
  return {true, "500 fixtures exact; hand case F1 = 0.4"};
}

struct OverfitRun {
  int epoch_to_perfect = -1;
  bool decreasing = false;
  std::vector<double> first_losses;
};

OverfitRun Overfit(HeadKind head, const Treebank& data) {
  EncoderConfig encoder = testing::TinyEncoder();
  encoder.lstm_size = 16;
  encoder.arc_mlp_dim = 16;
  encoder.rel_mlp_dim = 12;
  TrainConfig config;
  config.batch_size = static_cast<int>(data.size());  // one step per epoch
  config.learning_rate = 1e-2;
  config.max_epochs = 200;
  config.patience = 199;
  config.seed = 1;
  OverfitRun run;
  std::vector<double> losses;
  TrainOptions options;
  options.on_epoch = [&](const EpochRecord& e) {
    losses.push_back(e.train_loss);
    if (run.epoch_to_perfect < 0 && e.dev_metric == 1.0) run.epoch_to_perfect = e.epoch;
  };
  Train(InitializeModel(encoder, head, Vocabulary::Build(data), nullptr, 1), data, data, config,
        nullptr, nullptr, options);
  run.decreasing = losses.size() >= 5;
  for (std::size_t i = 1; i < 5 && i < losses.size(); ++i) {
    run.decreasing = run.decreasing && losses[i] < losses[i - 1];
  }
  run.first_losses.assign(losses.begin(), losses.begin() + std::min<std::size_t>(5, losses.size()));
  return run;
}

Outcome OverfitSanity() {
  const auto start = Clock::now();
  Treebank data = testing::FiveSentenceFixture();
  OverfitRun tagger = Overfit(HeadKind::kTagger, data);
  OverfitRun parser = Overfit(HeadKind::kParser, data);
  const double elapsed = Seconds(start);
  const bool pass = tagger.epoch_to_perfect > 0 && parser.epoch_to_perfect > 0 &&
                    tagger.decreasing && parser.decreasing && elapsed < 120.0;
  return {pass, fmt::format("tagger 100% at step {}, parser LAS 100% at step {}, losses "
                            "decreasing: {}/{}, {:.1f} s",
                            tagger.epoch_to_perfect, parser.epoch_to_perfect, tagger.decreasing,
                            parser.decreasing, elapsed)};
}

Outcome ToyExperiment() {
  const auto start = Clock::now();
  ToyTreebank toy = GenerateToyTreebank();
  std::set<std::string> inventory;
  for (const Sentence& s : toy.train.sentences) {
    for (const Token& t : s.tokens) inventory.insert(t.upos);
  }
  ExperimentConfig base = ToyExperimentConfig();
  MaskingConfig config;
  config.encoder = base.encoder;
  config.tagger_train = base.tagger_train;
  config.parser_train = base.parser_train;
  config.schemes = AllSchemes();
  config.seeds = {1, 2, 3};
  config.jobs = 1;
  MaskingResult result = RunMaskingExperiment({{"toy", toy.train, toy.dev, toy.test}}, config);
  const double elapsed = Seconds(start);
  std::string table;
  for (SchemeKind s : AllSchemes()) {
    table += fmt::format(" {}={:.2f}", SchemeLabel(s), 100.0 * result.MeanLas(s));
  }
  const double gold = result.MeanLas(SchemeKind::kGold);
  const double none = result.MeanLas(SchemeKind::kNone);
  const double mnet = result.MeanLas(SchemeKind::kMaskAllButTaggerErrors);
  const double pred = result.MeanLas(SchemeKind::kPred);
  const bool pass = inventory.size() == 12 && toy.train.size() == 500 && gold > none &&
                    mnet >= pred && elapsed < 1800.0;
  return {pass, fmt::format("{} tags, 3 seeds, LAS{}; {:.0f} s", inventory.size(), table, elapsed)};
}

Outcome AnalysisGolden() {
  // The open-class ratio formula on published counts.
  ClassBreakdown published;
  ClassBreakdown part;
  auto& open = part.classes[static_cast<int>(WordClass::kOpen)];
  open.errors_a = 6434;
  open.errors_b = 15181;
  Accumulate(published, part);
  const auto& ratio = published[WordClass::kOpen].ratio;
  if (!ratio || std::abs(*ratio - 6434.0 / 15181.0) > 1e-15 || std::round(*ratio * 100) != 42) {
    return {false, "open-class ratio formula"};
  }

  const fs::path out = fs::temp_directory_path() / "tagprobe_acceptance_analyze";
  fs::remove_all(out);
  const std::string inputs = testing::TestDataPath("analysis/inputs.json").string();
  for (const char* run : {"1", "2"}) {
    if (cli::Run({"--log-level", "warn", "analyze", "--inputs", inputs, "--out",
                  (out / run).string()}) != 0) {
      return {false, "analyze failed"};
    }
  }
  const std::string first = Slurp(out / "1/reports/analysis.json");
  const std::string second = Slurp(out / "2/reports/analysis.json");
  const std::string golden = Slurp(testing::TestDataPath("analysis/expected_analysis.json"));
  fs::remove_all(out);
  if (first != second) return {false, "JSON differs between runs"};
  if (first != golden) return {false, "JSON differs from the audited golden file"};

  // Hand-audited counts on the fixture.
  const nlohmann::json j = nlohmann::json::parse(first);
  const auto& classes = j["treebanks"][0]["classes"];
  const auto& tagger = j["treebanks"][0]["systems"][0];
  const auto& parser = j["treebanks"][0]["systems"][1];
  const bool counts_ok =
      classes["open"]["errors_tagger"] == 2 && classes["open"]["errors_parser"] == 2 &&
      classes["open"]["tokens"] == 4 && classes["closed"]["tokens"] == 2 &&
      classes["other"]["tokens"] == 1 && classes["all"]["ratio"] == 1.0 &&
      tagger["top_confusions"][0]["gold"] == "ADV" &&
      tagger["top_confusions"][1]["gold"] == "VERB" &&
      parser["top_confusions"][0]["gold"] == "NOUN" && tagger["oov"]["oov_tokens"] == 3 &&
      tagger["oov"]["tokens"] == 7 && tagger["oov"]["oov_error_tokens"] == 2 &&
      j["treebanks"][0]["crossover"]["both"] == 1;
  return {counts_ok, fmt::format("ratio 6434/15181 = {:.4f}; golden JSON byte-identical over 2 runs",
                                 *ratio)};
}

}  // namespace
}  // namespace tagprobe

int main(int argc, char** argv) {
  using tagprobe::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"CoNLL-U round trip", tagprobe::ConlluRoundTrip},
      {"PCA matches covariance oracle", tagprobe::PcaOracle},
      {"Chu-Liu/Edmonds matches brute force", tagprobe::DecoderOracle},
      {"probe leaves the encoder bit-identical", tagprobe::FreezeInvariant},
      {"surprisal matches count-and-log oracle", tagprobe::SurprisalOracle},
      {"error algebra and scheme definitions", tagprobe::ErrorAlgebra},
      {"metrics match per-token oracles", tagprobe::MetricOracles},
      {"overfit sanity", tagprobe::OverfitSanity},
      {"toy masking experiment ordering", tagprobe::ToyExperiment},
      {"analysis golden output", tagprobe::AnalysisGolden},
  };
  std::set<int> only;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--only") {
      std::stringstream list(argv[i + 1]);
      for (std::string item; std::getline(list, item, ',');) only.insert(std::stoi(item));
    }
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(number)) continue;
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += outcome.pass ? 0 : 1;
    std::cout << (outcome.pass ? "PASS " : "FAIL ") << number << " " << criteria[i].first << ": "
              << outcome.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
