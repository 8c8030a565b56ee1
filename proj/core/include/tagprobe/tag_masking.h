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

#ifndef TAGPROBE_TAG_MASKING_H_
#define TAGPROBE_TAG_MASKING_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tagprobe/conllu.h"
#include "tagprobe/embeddings.h"
#include "tagprobe/error_set.h"
#include "tagprobe/evaluation.h"
#include "tagprobe/model.h"
#include "tagprobe/trainer.h"
#include "tagprobe/upos.h"

namespace tagprobe {

// How a parser's tag inputs are filled in.
enum class SchemeKind {
  kNone,                    // no tag inputs at all
  kPred,                    // tagger output everywhere
  kMaskAllButTaggerErrors,  // gold where the tagger erred, MASK elsewhere
  kMaskAllButProbeErrors,   // gold where the probe erred, MASK elsewhere
  kMaskTaggerErrors,        // tagger output, MASK where it erred
  kGold,                    // gold everywhere
};

inline constexpr int kNumSchemes = 6;

const std::vector<SchemeKind>& AllSchemes();
// Stable identifier, e.g. "mask_all_but_tagger_errors".
std::string_view SchemeName(SchemeKind kind);
// Short column label, e.g. "MnotE_T".
std::string_view SchemeLabel(SchemeKind kind);
// Accepts identifiers, labels and a few aliases, case-insensitively.
std::optional<SchemeKind> ParseScheme(std::string_view text);

// What is known about one token when deciding its tag input.
struct TokenEvidence {
  Upos gold = Upos::kX;
  std::optional<Upos> predicted;
  bool tagger_error = false;
  bool probe_error = false;
};

// The tag input for one token. Throws InvalidArgument for kNone, which has no
// tag inputs, and when a needed prediction is missing.
TagInput ConditionToken(SchemeKind scheme, const TokenEvidence& evidence);

struct TagConditioning {
  SchemeKind scheme = SchemeKind::kNone;
  // Absent for kNone.
  std::optional<TagInputs> tags;
};

// Tag inputs for every token of `gold`. `predicted` is needed by kPred and
// kMaskTaggerErrors; `errors` by the two mask-all-but schemes (tagger or
// probe errors respectively) and optionally by kMaskTaggerErrors, which
// otherwise derives them from `predicted`.
TagConditioning BuildConditioning(SchemeKind scheme, const Treebank& gold,
                                  const std::vector<std::vector<Upos>>* predicted = nullptr,
                                  const ErrorSet* errors = nullptr);

// Tagger output and error sets over one split.
struct SplitEvidence {
  std::vector<std::vector<Upos>> predicted;
  ErrorSet tagger_errors;
  std::optional<ErrorSet> probe_errors;
};

TagConditioning ConditioningFor(SchemeKind scheme, const Treebank& gold,
                                const SplitEvidence& evidence);

struct TreebankSplits {
  std::string name;
  Treebank train;
  Treebank dev;
  Treebank test;
};

struct MaskingConfig {
  EncoderConfig encoder;  // use_tags is set per scheme
  TrainConfig tagger_train;
  TrainConfig parser_train;
  std::vector<SchemeKind> schemes;
  std::vector<std::uint64_t> seeds;
  int jobs = 1;  // parsers trained concurrently
  const EmbeddingTable* embeddings = nullptr;
};

struct SchemeRun {
  std::string treebank;
  SchemeKind scheme = SchemeKind::kNone;
  std::uint64_t seed = 0;
  ParseScore test;
  double best_dev_las = 0.0;
  int best_epoch = 0;
  int epochs = 0;
};

struct SeedSummary {
  std::string treebank;
  std::uint64_t seed = 0;
  double tagger_test_accuracy = 0.0;
  std::optional<double> probe_test_accuracy;
};

struct MaskingResult {
  std::vector<SchemeRun> runs;  // ordered by treebank, seed, then scheme
  std::vector<SeedSummary> seeds;

  // Mean test LAS over all runs of `scheme`, optionally within one treebank.
  double MeanLas(SchemeKind scheme, std::string_view treebank = {}) const;
};

// Called after each trained model, e.g. to save it. Labels look like
// "en-seed3-tagger" or "en-seed3-parser-gold".
using ModelSink = std::function<void(const std::string& label, const ModelState& state,
                                     const TrainHistory& history)>;

// For each treebank and seed: trains a tagger and tags every split, trains a
// tag-free parser and probes it when the probe scheme is requested, then
// trains one parser per scheme with the same seed and configuration apart
// from its tag inputs, and scores it on test.
MaskingResult RunMaskingExperiment(const std::vector<TreebankSplits>& treebanks,
                                   const MaskingConfig& config, const ModelSink& sink = {});

// One row per scheme: scheme,label,las,uas,runs.
std::string LasBySchemeCsv(const MaskingResult& result, const std::vector<SchemeKind>& schemes);
// Treebank rows by scheme columns plus an "avg" row, LAS in percent.
std::string LasTableCsv(const MaskingResult& result, const std::vector<SchemeKind>& schemes);
// Every run, one row each.
std::string LasRunsCsv(const MaskingResult& result);

}  // namespace tagprobe

#endif  // TAGPROBE_TAG_MASKING_H_
