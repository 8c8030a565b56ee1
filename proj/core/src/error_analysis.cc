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

#include "tagprobe/error_analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tagprobe/errors.h"

namespace tagprobe {
namespace {

constexpr int kBosSymbol = kNumUpos;
constexpr int kRootSymbol = kNumUpos + 1;

double Share(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(whole);
}

Upos GoldTagAt(const Sentence& sentence, std::size_t position) {
  const Token& token = sentence.tokens[position];
  std::optional<Upos> tag = ParseUpos(token.upos);
  if (!tag) throw InvalidArgument("unknown UPOS tag '" + token.upos + "'");
  return *tag;
}

void FillRatio(ClassCounts& counts) {
  if (counts.errors_b == 0) {
    counts.ratio.reset();
  } else {
    counts.ratio = static_cast<double>(counts.errors_a) / static_cast<double>(counts.errors_b);
  }
}

}  // namespace

double Crossover::OnlyAShare() const { return Share(only_a, union_size); }
double Crossover::OnlyBShare() const { return Share(only_b, union_size); }
double Crossover::BothShare() const { return Share(both, union_size); }

Crossover ComputeCrossover(const ErrorSet& a, const ErrorSet& b) {
  // Records are sorted by position, so a merge walk finds the overlap.
  const auto& ra = a.records();
  const auto& rb = b.records();
  auto key = [](const ErrorRecord& r) { return std::pair(r.sentence_index, r.token_index); };
  Crossover out;
  std::size_t i = 0, j = 0;
  while (i < ra.size() && j < rb.size()) {
    if (key(ra[i]) < key(rb[j])) {
      ++out.only_a, ++i;
    } else if (key(rb[j]) < key(ra[i])) {
      ++out.only_b, ++j;
    } else {
      ++out.both, ++i, ++j;
    }
  }
  out.only_a += ra.size() - i;
  out.only_b += rb.size() - j;
  out.union_size = out.only_a + out.only_b + out.both;
  return out;
}

ClassBreakdown ComputeClassBreakdown(const ErrorSet& a, const ErrorSet& b,
                                     const Treebank& gold) {
  a.CheckRange(gold);
  b.CheckRange(gold);
  ClassBreakdown out;
  for (const Sentence& sentence : gold.sentences) {
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      ++out.classes[static_cast<int>(ClassOf(GoldTagAt(sentence, i)))].tokens;
      ++out.all.tokens;
    }
  }
  for (const ErrorRecord& r : a.records()) {
    ++out.classes[static_cast<int>(ClassOf(r.gold))].errors_a;
    ++out.all.errors_a;
  }
  for (const ErrorRecord& r : b.records()) {
    ++out.classes[static_cast<int>(ClassOf(r.gold))].errors_b;
    ++out.all.errors_b;
  }
  for (ClassCounts& c : out.classes) FillRatio(c);
  FillRatio(out.all);
  return out;
}

void Accumulate(ClassBreakdown& total, const ClassBreakdown& part) {
  auto add = [](ClassCounts& into, const ClassCounts& from) {
    into.errors_a += from.errors_a;
    into.errors_b += from.errors_b;
    into.tokens += from.tokens;
    FillRatio(into);
  };
  for (int c = 0; c < kNumWordClasses; ++c) add(total.classes[c], part.classes[c]);
  add(total.all, part.all);
}

void TagScores::Add(const std::vector<std::vector<Upos>>& predicted, const Treebank& gold) {
  if (predicted.size() != gold.sentences.size()) {
    throw InvalidArgument("prediction covers " + std::to_string(predicted.size()) +
                          " sentences, gold has " + std::to_string(gold.sentences.size()));
  }
  for (std::size_t s = 0; s < predicted.size(); ++s) {
    const Sentence& sentence = gold.sentences[s];
    if (predicted[s].size() != sentence.tokens.size()) {
      throw InvalidArgument("length mismatch in sentence " + std::to_string(s));
    }
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      int g = UposIndex(GoldTagAt(sentence, i));
      int p = UposIndex(predicted[s][i]);
      ++gold_[g];
      ++predicted_[p];
      if (g == p) ++correct_[g];
    }
  }
}

void TagScores::Merge(const TagScores& other) {
  for (int t = 0; t < kNumUpos; ++t) {
    gold_[t] += other.gold_[t];
    predicted_[t] += other.predicted_[t];
    correct_[t] += other.correct_[t];
  }
}

std::optional<TagScore> TagScores::Get(Upos tag) const {
  int t = UposIndex(tag);
  if (gold_[t] == 0 && predicted_[t] == 0) return std::nullopt;
  TagScore s;
  s.gold = gold_[t];
  s.predicted = predicted_[t];
  s.correct = correct_[t];
  s.precision = Share(s.correct, s.predicted);
  s.recall = Share(s.correct, s.gold);
  // 2PR / (P + R) rewritten as 2C / (G + P): one rounding instead of four.
  s.f1 = Share(2 * s.correct, s.gold + s.predicted);
  return s;
}

double TagScores::MicroF1() const {
  std::size_t g = 0, p = 0, c = 0;
  for (int t = 0; t < kNumUpos; ++t) {
    g += gold_[t];
    p += predicted_[t];
    c += correct_[t];
  }
  return Share(2 * c, g + p);
}

TagScores PerTagF1(const std::vector<std::vector<Upos>>& predicted, const Treebank& gold) {
  TagScores scores;
  scores.Add(predicted, gold);
  return scores;
}

std::vector<Confusion> TopConfusions(const ErrorSet& errors, std::size_t k) {
  std::map<std::pair<int, int>, std::size_t> counts;
  for (const ErrorRecord& r : errors.records()) {
    ++counts[{UposIndex(r.gold), UposIndex(r.predicted)}];
  }
  std::vector<Confusion> out;
  out.reserve(counts.size());
  for (const auto& [pair, count] : counts) {
    out.push_back({UposFromIndex(pair.first), UposFromIndex(pair.second), count});
  }
  std::sort(out.begin(), out.end(), [](const Confusion& x, const Confusion& y) {
    if (x.count != y.count) return x.count > y.count;
    if (x.gold != y.gold) return UposName(x.gold) < UposName(y.gold);
    return UposName(x.predicted) < UposName(y.predicted);
  });
  if (out.size() > k) out.resize(k);
  return out;
}

std::string_view ContextKindName(ContextKind kind) {
  return kind == ContextKind::kBigram ? "bigram" : "head_relation";
}

double Surprisal(double probability) {
  if (probability < 0.0 || probability > 1.0) {
    throw InvalidArgument("probability outside [0, 1]");
  }
  if (probability == 0.0) return std::numeric_limits<double>::infinity();
  double bits = -std::log2(probability);
  return bits == 0.0 ? 0.0 : bits;  // avoid -0
}

TagContextModel::TagContextModel(const Treebank& train, ContextKind kind,
                                 SurprisalOptions options)
    : kind_(kind), options_(options) {
  for (const Sentence& sentence : train.sentences) {
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      Context context = ContextOf(sentence, i);
      ++counts_[context][UposIndex(GoldTagAt(sentence, i))];
      ++totals_[context];
    }
  }
}

TagContextModel::Context TagContextModel::ContextOf(const Sentence& sentence,
                                                    std::size_t position) const {
  if (kind_ == ContextKind::kBigram) {
    int prev2 = position >= 2 ? UposIndex(GoldTagAt(sentence, position - 2)) : kBosSymbol;
    int prev1 = position >= 1 ? UposIndex(GoldTagAt(sentence, position - 1)) : kBosSymbol;
    return {prev2, prev1, std::string()};
  }
  const Token& token = sentence.tokens[position];
  int head = token.head;
  int head_tag = head == 0 ? kRootSymbol
                           : UposIndex(GoldTagAt(sentence, static_cast<std::size_t>(head - 1)));
  return {head_tag, 0, token.deprel};
}

double TagContextModel::Probability(const Sentence& sentence, std::size_t position) const {
  Context context = ContextOf(sentence, position);
  int tag = UposIndex(GoldTagAt(sentence, position));
  std::size_t count = 0, total = 0;
  if (auto it = totals_.find(context); it != totals_.end()) {
    total = it->second;
    count = counts_.at(context)[tag];
  }
  if (options_.add_one) {
    return static_cast<double>(count + 1) / static_cast<double>(total + kNumUpos);
  }
  return Share(count, total);
}

double TagContextModel::TokenSurprisal(const Sentence& sentence, std::size_t position) const {
  return Surprisal(Probability(sentence, position));
}

SurprisalStats MeanSurprisal(const TagContextModel& model, const Treebank& target,
                             const ErrorSet& errors) {
  errors.CheckRange(target);
  SurprisalStats stats;
  stats.context_kind = model.kind();
  double sum_all = 0.0, sum_errors = 0.0;
  for (std::size_t s = 0; s < target.sentences.size(); ++s) {
    const Sentence& sentence = target.sentences[s];
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      double bits = model.TokenSurprisal(sentence, i);
      sum_all += bits;
      ++stats.tokens;
      if (errors.Contains(static_cast<int>(s), static_cast<int>(i) + 1)) {
        sum_errors += bits;
        ++stats.error_tokens;
      }
    }
  }
  stats.mean_all = stats.tokens == 0 ? 0.0 : sum_all / static_cast<double>(stats.tokens);
  stats.mean_errors =
      stats.error_tokens == 0 ? 0.0 : sum_errors / static_cast<double>(stats.error_tokens);
  return stats;
}

SurprisalStats BigramSurprisal(const Treebank& train, const Treebank& target,
                               const ErrorSet& errors, SurprisalOptions options) {
  return MeanSurprisal(TagContextModel(train, ContextKind::kBigram, options), target, errors);
}

SurprisalStats HeadRelSurprisal(const Treebank& train, const Treebank& target,
                                const ErrorSet& errors, SurprisalOptions options) {
  return MeanSurprisal(TagContextModel(train, ContextKind::kHeadRelation, options), target,
                       errors);
}

OovStats OovErrorStats(const std::vector<std::vector<bool>>& oov_flags, const ErrorSet& errors) {
  OovStats stats;
  for (const auto& sentence : oov_flags) {
    stats.tokens += sentence.size();
    stats.oov_tokens += static_cast<std::size_t>(std::count(sentence.begin(), sentence.end(), true));
  }
  for (const ErrorRecord& r : errors.records()) {
    if (r.sentence_index < 0 || static_cast<std::size_t>(r.sentence_index) >= oov_flags.size() ||
        r.token_index < 1 ||
        static_cast<std::size_t>(r.token_index) > oov_flags[r.sentence_index].size()) {
      throw InvalidArgument("error record outside the OOV flag table");
    }
    ++stats.error_tokens;
    if (oov_flags[r.sentence_index][r.token_index - 1]) ++stats.oov_error_tokens;
  }
  stats.all = Share(stats.oov_tokens, stats.tokens);
  stats.errors = Share(stats.oov_error_tokens, stats.error_tokens);
  return stats;
}

}  // namespace tagprobe
