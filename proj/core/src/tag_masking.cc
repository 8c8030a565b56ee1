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

#include "tagprobe/tag_masking.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "tagprobe/errors.h"
#include "tagprobe/probe.h"
#include "tagprobe/vocabulary.h"

namespace tagprobe {
namespace {

struct SchemeInfo {
  SchemeKind kind;
  std::string_view name;
  std::string_view label;
};

constexpr SchemeInfo kSchemes[] = {
    {SchemeKind::kNone, "none", "None"},
    {SchemeKind::kPred, "pred", "Pred"},
    {SchemeKind::kMaskAllButTaggerErrors, "mask_all_but_tagger_errors", "MnotE_T"},
    {SchemeKind::kMaskAllButProbeErrors, "mask_all_but_probe_errors", "MnotE_P"},
    {SchemeKind::kMaskTaggerErrors, "mask_tagger_errors", "MallE_T"},
    {SchemeKind::kGold, "gold", "Gold"},
};

std::string Lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::replace(out.begin(), out.end(), '-', '_');
  return out;
}

bool NeedsProbe(const std::vector<SchemeKind>& schemes) {
  return std::find(schemes.begin(), schemes.end(), SchemeKind::kMaskAllButProbeErrors) !=
         schemes.end();
}

// Runs tasks[0..n) on up to `jobs` threads; rethrows the first failure.
void RunParallel(std::size_t n, int jobs, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min<std::size_t>(n, std::max(jobs, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct ParserOutcome {
  TrainResult trained;
  ParseScore test;
};

ParserOutcome TrainParser(const TreebankSplits& splits, const Vocabulary& vocabulary,
                          const MaskingConfig& config, SchemeKind scheme, std::uint64_t seed,
                          const SplitEvidence* train_evidence, const SplitEvidence* dev_evidence,
                          const SplitEvidence* test_evidence) {
  EncoderConfig encoder = config.encoder;
  encoder.use_tags = scheme != SchemeKind::kNone;
  ModelState state =
      InitializeModel(encoder, HeadKind::kParser, vocabulary, config.embeddings, seed);
  state.tag_scheme = std::string(SchemeName(scheme));

  TagConditioning train_tags, dev_tags, test_tags;
  if (scheme != SchemeKind::kNone) {
    train_tags = ConditioningFor(scheme, splits.train, *train_evidence);
    dev_tags = ConditioningFor(scheme, splits.dev, *dev_evidence);
    test_tags = ConditioningFor(scheme, splits.test, *test_evidence);
  }
  auto ptr = [](const TagConditioning& c) { return c.tags ? &*c.tags : nullptr; };

  TrainConfig train_config = config.parser_train;
  train_config.seed = seed;
  ParserOutcome out{Train(std::move(state), splits.train, splits.dev, train_config,
                          ptr(train_tags), ptr(dev_tags)),
                    {}};
  out.test = AttachmentScores(
      PredictTrees(out.trained.state, splits.test, ptr(test_tags), train_config.decoder),
      splits.test);
  return out;
}

}  // namespace

const std::vector<SchemeKind>& AllSchemes() {
  static const std::vector<SchemeKind> all = [] {
    std::vector<SchemeKind> v;
    for (const SchemeInfo& s : kSchemes) v.push_back(s.kind);
    return v;
  }();
  return all;
}

std::string_view SchemeName(SchemeKind kind) { return kSchemes[static_cast<int>(kind)].name; }
std::string_view SchemeLabel(SchemeKind kind) { return kSchemes[static_cast<int>(kind)].label; }

std::optional<SchemeKind> ParseScheme(std::string_view text) {
  const std::string key = Lower(text);
  for (const SchemeInfo& s : kSchemes) {
    if (key == s.name || key == Lower(s.label)) return s.kind;
  }
  static const std::map<std::string, SchemeKind> aliases = {
      {"predicted", SchemeKind::kPred},
      {"mnet", SchemeKind::kMaskAllButTaggerErrors},
      {"mnep", SchemeKind::kMaskAllButProbeErrors},
      {"maet", SchemeKind::kMaskTaggerErrors},
  };
  if (auto it = aliases.find(key); it != aliases.end()) return it->second;
  return std::nullopt;
}

TagInput ConditionToken(SchemeKind scheme, const TokenEvidence& evidence) {
  auto predicted = [&]() -> Upos {
    if (!evidence.predicted) {
      throw InvalidArgument(std::string(SchemeName(scheme)) + " needs predicted tags");
    }
    return *evidence.predicted;
  };
  switch (scheme) {
    case SchemeKind::kNone:
      throw InvalidArgument("the none scheme has no tag inputs");
    case SchemeKind::kPred:
      return predicted();
    case SchemeKind::kMaskAllButTaggerErrors:
      return evidence.tagger_error ? TagInput(evidence.gold) : std::nullopt;
    case SchemeKind::kMaskAllButProbeErrors:
      return evidence.probe_error ? TagInput(evidence.gold) : std::nullopt;
    case SchemeKind::kMaskTaggerErrors:
      return evidence.tagger_error ? std::nullopt : TagInput(predicted());
    case SchemeKind::kGold:
      return evidence.gold;
  }
  throw InvalidArgument("unknown scheme");
}

TagConditioning BuildConditioning(SchemeKind scheme, const Treebank& gold,
                                  const std::vector<std::vector<Upos>>* predicted,
                                  const ErrorSet* errors) {
  TagConditioning out;
  out.scheme = scheme;
  if (scheme == SchemeKind::kNone) return out;

  const bool needs_predicted =
      scheme == SchemeKind::kPred || scheme == SchemeKind::kMaskTaggerErrors;
  const bool needs_errors = scheme == SchemeKind::kMaskAllButTaggerErrors ||
                            scheme == SchemeKind::kMaskAllButProbeErrors;
  if (needs_predicted) {
    if (!predicted) {
      throw InvalidArgument(std::string(SchemeName(scheme)) + " needs predicted tags");
    }
    if (predicted->size() != gold.size()) {
      throw InvalidArgument("predicted tags do not cover every sentence");
    }
  }
  if (needs_errors && !errors) {
    throw InvalidArgument(std::string(SchemeName(scheme)) + " needs an error set");
  }
  ErrorSet derived;
  if (scheme == SchemeKind::kMaskTaggerErrors && !errors) {
    derived = CollectErrors(*predicted, gold);
    errors = &derived;
  }
  if (errors) errors->CheckRange(gold);

  const std::vector<std::vector<Upos>> gold_tags = GoldTags(gold);
  TagInputs& tags = out.tags.emplace();
  tags.resize(gold.size());
  for (std::size_t s = 0; s < gold.size(); ++s) {
    const std::size_t n = gold.sentences[s].size();
    if (needs_predicted && (*predicted)[s].size() != n) {
      throw InvalidArgument("predicted tags misaligned in sentence " + std::to_string(s));
    }
    tags[s].reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      TokenEvidence evidence;
      evidence.gold = gold_tags[s][i];
      if (needs_predicted) evidence.predicted = (*predicted)[s][i];
      const bool in_errors =
          errors && errors->Contains(static_cast<int>(s), static_cast<int>(i) + 1);
      evidence.tagger_error = in_errors && scheme != SchemeKind::kMaskAllButProbeErrors;
      evidence.probe_error = in_errors && scheme == SchemeKind::kMaskAllButProbeErrors;
      tags[s].push_back(ConditionToken(scheme, evidence));
    }
  }
  return out;
}

TagConditioning ConditioningFor(SchemeKind scheme, const Treebank& gold,
                                const SplitEvidence& evidence) {
  if (scheme == SchemeKind::kMaskAllButProbeErrors) {
    if (!evidence.probe_errors) {
      throw InvalidArgument("probe errors missing for the " + std::string(SplitName(gold.split)) +
                            " split");
    }
    return BuildConditioning(scheme, gold, nullptr, &*evidence.probe_errors);
  }
  return BuildConditioning(scheme, gold, &evidence.predicted, &evidence.tagger_errors);
}

double MaskingResult::MeanLas(SchemeKind scheme, std::string_view treebank) const {
  double sum = 0.0;
  int count = 0;
  for (const SchemeRun& run : runs) {
    if (run.scheme != scheme || (!treebank.empty() && run.treebank != treebank)) continue;
    sum += run.test.las;
    ++count;
  }
  return count == 0 ? 0.0 : sum / count;
}

MaskingResult RunMaskingExperiment(const std::vector<TreebankSplits>& treebanks,
                                   const MaskingConfig& config, const ModelSink& sink) {
  if (config.seeds.empty()) throw InvalidArgument("no seeds given");
  if (config.schemes.empty()) throw InvalidArgument("no schemes given");
  config.encoder.Validate();
  MaskingResult result;
  std::mutex sink_mutex;
  auto emit = [&](const std::string& label, const TrainResult& trained) {
    if (!sink) return;
    std::lock_guard lock(sink_mutex);
    sink(label, trained.state, trained.history);
  };

  for (const TreebankSplits& splits : treebanks) {
    const Vocabulary vocabulary = Vocabulary::Build(splits.train);
    for (std::uint64_t seed : config.seeds) {
      const std::string prefix = fmt::format("{}-seed{}", splits.name, seed);
      SeedSummary summary{splits.name, seed, 0.0, std::nullopt};

      // Tagger and its output on every split.
      EncoderConfig tagger_encoder = config.encoder;
      tagger_encoder.use_tags = false;
      TrainConfig tagger_config = config.tagger_train;
      tagger_config.seed = seed;
      TrainResult tagger =
          Train(InitializeModel(tagger_encoder, HeadKind::kTagger, vocabulary, config.embeddings,
                                seed),
                splits.train, splits.dev, tagger_config);
      emit(prefix + "-tagger", tagger);
      SplitEvidence evidence[3];
      const Treebank* split_data[3] = {&splits.train, &splits.dev, &splits.test};
      for (int k = 0; k < 3; ++k) {
        TagPredictions p = PredictTags(tagger.state, *split_data[k]);
        evidence[k].predicted = std::move(p.tags);
        evidence[k].tagger_errors = std::move(p.errors);
        if (k == 2) summary.tagger_test_accuracy = p.accuracy;
      }
      spdlog::info("{} tagger test accuracy {:.4f}", prefix, summary.tagger_test_accuracy);

      // The tag-free parser doubles as the probe source.
      std::vector<SchemeKind> pending = config.schemes;
      std::map<SchemeKind, ParserOutcome> outcomes;
      if (NeedsProbe(config.schemes)) {
        ParserOutcome none = TrainParser(splits, vocabulary, config, SchemeKind::kNone, seed,
                                         nullptr, nullptr, nullptr);
        TrainConfig probe_config = config.parser_train;
        probe_config.seed = seed;
        ProbeResult probe = ProbeAsTagger(none.trained.state, splits.train, splits.test,
                                          probe_config);
        summary.probe_test_accuracy = probe.report.accuracy;
        for (int k = 0; k < 3; ++k) {
          evidence[k].probe_errors = PredictTags(probe.probe, *split_data[k]).errors;
        }
        spdlog::info("{} probe test accuracy {:.4f}", prefix, probe.report.accuracy);
        emit(prefix + "-parser-none", none.trained);
        if (std::find(pending.begin(), pending.end(), SchemeKind::kNone) != pending.end()) {
          outcomes.emplace(SchemeKind::kNone, std::move(none));
          pending.erase(std::find(pending.begin(), pending.end(), SchemeKind::kNone));
        }
      }

      std::vector<std::optional<ParserOutcome>> trained(pending.size());
      RunParallel(pending.size(), config.jobs, [&](std::size_t i) {
        trained[i] = TrainParser(splits, vocabulary, config, pending[i], seed, &evidence[0],
                                 &evidence[1], &evidence[2]);
        emit(fmt::format("{}-parser-{}", prefix, SchemeName(pending[i])), trained[i]->trained);
      });
      for (std::size_t i = 0; i < pending.size(); ++i) {
        outcomes.emplace(pending[i], std::move(*trained[i]));
      }

      for (SchemeKind scheme : config.schemes) {
        const ParserOutcome& o = outcomes.at(scheme);
        SchemeRun run;
        run.treebank = splits.name;
        run.scheme = scheme;
        run.seed = seed;
        run.test = o.test;
        run.best_dev_las = o.trained.history.best_dev_metric;
        run.best_epoch = o.trained.history.best_epoch;
        run.epochs = static_cast<int>(o.trained.history.epochs.size());
        spdlog::info("{} {} test LAS {:.4f}", prefix, SchemeName(scheme), run.test.las);
        result.runs.push_back(run);
      }
      result.seeds.push_back(summary);
    }
  }
  return result;
}

std::string LasBySchemeCsv(const MaskingResult& result, const std::vector<SchemeKind>& schemes) {
  std::string csv = "scheme,label,las,uas,runs\n";
  for (SchemeKind scheme : schemes) {
    double las = 0.0, uas = 0.0;
    int runs = 0;
    for (const SchemeRun& run : result.runs) {
      if (run.scheme != scheme) continue;
      las += run.test.las;
      uas += run.test.uas;
      ++runs;
    }
    if (runs > 0) las /= runs, uas /= runs;
    csv += fmt::format("{},{},{:.2f},{:.2f},{}\n", SchemeName(scheme), SchemeLabel(scheme),
                       100.0 * las, 100.0 * uas, runs);
  }
  return csv;
}

std::string LasTableCsv(const MaskingResult& result, const std::vector<SchemeKind>& schemes) {
  std::vector<std::string> names;
  for (const SchemeRun& run : result.runs) {
    if (std::find(names.begin(), names.end(), run.treebank) == names.end()) {
      names.push_back(run.treebank);
    }
  }
  std::string csv = "treebank";
  for (SchemeKind scheme : schemes) csv += fmt::format(",{}", SchemeLabel(scheme));
  csv += '\n';
  for (const std::string& name : names) {
    csv += name;
    for (SchemeKind scheme : schemes) {
      csv += fmt::format(",{:.2f}", 100.0 * result.MeanLas(scheme, name));
    }
    csv += '\n';
  }
  // Average of the per-treebank means.
  csv += "avg";
  for (SchemeKind scheme : schemes) {
    double sum = 0.0;
    for (const std::string& name : names) sum += result.MeanLas(scheme, name);
    csv += fmt::format(",{:.2f}", names.empty() ? 0.0 : 100.0 * sum / names.size());
  }
  return csv + '\n';
}

std::string LasRunsCsv(const MaskingResult& result) {
  std::string csv = "treebank,scheme,seed,las,uas,tokens,best_dev_las,best_epoch,epochs\n";
  for (const SchemeRun& r : result.runs) {
    csv += fmt::format("{},{},{},{:.6f},{:.6f},{},{:.6f},{},{}\n", r.treebank,
                       SchemeName(r.scheme), r.seed, r.test.las, r.test.uas, r.test.token_count,
                       r.best_dev_las, r.best_epoch, r.epochs);
  }
  return csv;
}

}  // namespace tagprobe
