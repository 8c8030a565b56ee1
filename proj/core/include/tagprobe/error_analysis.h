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

#ifndef TAGPROBE_ERROR_ANALYSIS_H_
#define TAGPROBE_ERROR_ANALYSIS_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "tagprobe/conllu.h"
#include "tagprobe/error_set.h"
#include "tagprobe/upos.h"

namespace tagprobe {

// Overlap between the error positions of two systems.
struct Crossover {
  std::size_t only_a = 0;
  std::size_t only_b = 0;
  std::size_t both = 0;
  std::size_t union_size = 0;

  // Shares of the union, in [0, 1]; zero for an empty union.
  double OnlyAShare() const;
  double OnlyBShare() const;
  double BothShare() const;
};

// Both sets must index the same treebank.
Crossover ComputeCrossover(const ErrorSet& a, const ErrorSet& b);

struct ClassCounts {
  std::size_t errors_a = 0;
  std::size_t errors_b = 0;
  std::size_t tokens = 0;
  // errors_a / errors_b; absent when errors_b is zero.
  std::optional<double> ratio;
};

// Error and token counts keyed by the gold tag's word class.
struct ClassBreakdown {
  std::array<ClassCounts, kNumWordClasses> classes;
  ClassCounts all;

  const ClassCounts& operator[](WordClass c) const {
    return classes[static_cast<int>(c)];
  }
};

ClassBreakdown ComputeClassBreakdown(const ErrorSet& a, const ErrorSet& b,
                                     const Treebank& gold);
// Adds counts of another treebank and recomputes ratios.
void Accumulate(ClassBreakdown& total, const ClassBreakdown& part);

struct TagScore {
  std::size_t gold = 0;
  std::size_t predicted = 0;
  std::size_t correct = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Counts behind per-tag precision, recall and F1. Tags that are neither
// predicted nor gold anywhere are absent.
class TagScores {
 public:
  void Add(const std::vector<std::vector<Upos>>& predicted, const Treebank& gold);
  void Merge(const TagScores& other);

  std::optional<TagScore> Get(Upos tag) const;
  // Pooled over all tags; equals accuracy when every token has one
  // prediction.
  double MicroF1() const;

 private:
  std::array<std::size_t, kNumUpos> gold_{};
  std::array<std::size_t, kNumUpos> predicted_{};
  std::array<std::size_t, kNumUpos> correct_{};
};

// Throws InvalidArgument when predicted and gold are not aligned.
TagScores PerTagF1(const std::vector<std::vector<Upos>>& predicted, const Treebank& gold);

struct Confusion {
  Upos gold;
  Upos predicted;
  std::size_t count = 0;

  friend bool operator==(const Confusion&, const Confusion&) = default;
};

// The k most frequent (gold -> predicted) pairs, by descending count, ties
// ordered by gold then predicted tag name.
std::vector<Confusion> TopConfusions(const ErrorSet& errors, std::size_t k = 5);

enum class ContextKind { kBigram, kHeadRelation };

std::string_view ContextKindName(ContextKind kind);

struct SurprisalOptions {
  // Add-one smoothing over the 17-tag inventory; without it unseen events
  // have infinite surprisal.
  bool add_one = true;
};

struct SurprisalStats {
  double mean_all = 0.0;     // bits, over every target token
  double mean_errors = 0.0;  // bits, over error tokens (0 with no errors)
  std::size_t tokens = 0;
  std::size_t error_tokens = 0;
  ContextKind context_kind = ContextKind::kBigram;
};

// -log2 p.
double Surprisal(double probability);

// Conditional tag distributions p(tag | context) estimated from gold
// training tags. Bigram contexts are the two preceding tags, padded with BOS;
// head-relation contexts are the gold head's tag (ROOT for the root) and the
// gold relation.
class TagContextModel {
 public:
  TagContextModel(const Treebank& train, ContextKind kind, SurprisalOptions options = {});

  double Probability(const Sentence& sentence, std::size_t position) const;
  double TokenSurprisal(const Sentence& sentence, std::size_t position) const;
  ContextKind kind() const { return kind_; }

 private:
  // Tag indices with 17 = BOS and 18 = ROOT; relation string empty for
  // bigram contexts.
  using Context = std::tuple<int, int, std::string>;

  Context ContextOf(const Sentence& sentence, std::size_t position) const;

  ContextKind kind_;
  SurprisalOptions options_;
  std::map<Context, std::array<std::size_t, kNumUpos>> counts_;
  std::map<Context, std::size_t> totals_;
};

SurprisalStats MeanSurprisal(const TagContextModel& model, const Treebank& target,
                             const ErrorSet& errors);
SurprisalStats BigramSurprisal(const Treebank& train, const Treebank& target,
                               const ErrorSet& errors, SurprisalOptions options = {});
SurprisalStats HeadRelSurprisal(const Treebank& train, const Treebank& target,
                                const ErrorSet& errors, SurprisalOptions options = {});

struct OovStats {
  double all = 0.0;     // OOV share over every token
  double errors = 0.0;  // OOV share over error tokens
  std::size_t tokens = 0;
  std::size_t oov_tokens = 0;
  std::size_t error_tokens = 0;
  std::size_t oov_error_tokens = 0;
};

OovStats OovErrorStats(const std::vector<std::vector<bool>>& oov_flags, const ErrorSet& errors);

}  // namespace tagprobe

#endif  // TAGPROBE_ERROR_ANALYSIS_H_
