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

#include <algorithm>
#include <cmath>
#include <iterator>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.h"
#include "tagprobe/error_analysis.h"
#include "tagprobe/errors.h"
#include "test_support.h"

namespace tagprobe {
namespace {

ErrorRecord E(int s, int t, Upos gold = Upos::kNoun, Upos pred = Upos::kVerb) {
  return {s, t, gold, pred};
}

// Builds a treebank from tag-name rows with a flat tree: token 1 is the root
// and every other token attaches to it as "dep".
Treebank FlatTreebank(const std::vector<std::vector<std::string>>& rows) {
  std::string text;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      text += std::to_string(i + 1) + "\tw" + std::to_string(i) + "\t_\t" + row[i] + "\t_\t_\t" +
              (i == 0 ? "0\troot" : "1\tdep") + "\t_\t_\n";
    }
    text += "\n";
  }
  return ParseConlluString(text);
}

TEST(ErrorSetTest, RejectsCorrectTagsAndDuplicates) {
  EXPECT_THROW(ErrorSet({E(0, 1, Upos::kNoun, Upos::kNoun)}), InvalidArgument);
  EXPECT_THROW(ErrorSet({E(0, 1), E(0, 1, Upos::kAdj)}), InvalidArgument);
  ErrorSet set({E(1, 2), E(0, 3)});
  EXPECT_EQ(set.records().front().sentence_index, 0);
  EXPECT_TRUE(set.Contains(1, 2));
  EXPECT_FALSE(set.Contains(1, 3));
}

TEST(CrossoverTest, HandCase) {
  ErrorSet a({E(0, 1), E(0, 2)});
  ErrorSet b({E(0, 2, Upos::kNoun, Upos::kAdj), E(0, 3), E(1, 1)});
  Crossover x = ComputeCrossover(a, b);
  EXPECT_EQ(x.only_a, 1u);
  EXPECT_EQ(x.only_b, 2u);
  EXPECT_EQ(x.both, 1u);
  EXPECT_EQ(x.union_size, 4u);
  EXPECT_DOUBLE_EQ(x.OnlyBShare(), 0.5);
  Crossover same = ComputeCrossover(a, a);
  EXPECT_EQ(same.only_a + same.only_b, 0u);
  EXPECT_EQ(ComputeCrossover(ErrorSet(), ErrorSet()).BothShare(), 0.0);
}

TEST(CrossoverTest, UnionIdentityOnRandomSets) {
  std::mt19937_64 rng(1);
  std::bernoulli_distribution coin(0.3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ErrorRecord> ra, rb;
    std::set<std::pair<int, int>> sa, sb;
    for (int s = 0; s < 4; ++s) {
      for (int t = 1; t <= 6; ++t) {
        if (coin(rng)) ra.push_back(E(s, t)), sa.insert({s, t});
        if (coin(rng)) rb.push_back(E(s, t)), sb.insert({s, t});
      }
    }
    Crossover x = ComputeCrossover(ErrorSet(ra), ErrorSet(rb));
    std::set<std::pair<int, int>> both;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                          std::inserter(both, both.begin()));
    EXPECT_EQ(x.both, both.size());
    EXPECT_EQ(x.union_size, ra.size() + rb.size() - x.both);
  }
}

TEST(ClassBreakdownTest, CountsByGoldClassAndRatio) {
  Treebank gold = FlatTreebank({{"NOUN", "ADP", "PUNCT", "VERB"}});
  ErrorSet a({E(0, 1, Upos::kNoun, Upos::kVerb)});
  ErrorSet b({E(0, 1, Upos::kNoun, Upos::kAdj), E(0, 2, Upos::kAdp, Upos::kAdv),
              E(0, 4, Upos::kVerb, Upos::kNoun)});
  ClassBreakdown c = ComputeClassBreakdown(a, b, gold);
  EXPECT_EQ(c[WordClass::kOpen].errors_a, 1u);
  EXPECT_EQ(c[WordClass::kOpen].errors_b, 2u);
  EXPECT_EQ(c[WordClass::kOpen].tokens, 2u);
  EXPECT_DOUBLE_EQ(*c[WordClass::kOpen].ratio, 0.5);
  EXPECT_DOUBLE_EQ(*c[WordClass::kClosed].ratio, 0.0);
  EXPECT_FALSE(c[WordClass::kOther].ratio.has_value());  // no errors for b
  EXPECT_EQ(c.all.tokens, 4u);
  std::size_t sum = 0;
  for (const ClassCounts& k : c.classes) sum += k.errors_b;
  EXPECT_EQ(sum, c.all.errors_b);
}

TEST(ClassBreakdownTest, RatioFormulaOnPublishedCounts) {
  // Pooled counts reported for the tagger and parser probe.
  auto ratio = [](std::size_t a, std::size_t b) {
    ClassCounts c;
    c.errors_a = a;
    c.errors_b = b;
    return static_cast<double>(c.errors_a) / static_cast<double>(c.errors_b);
  };
  EXPECT_NEAR(ratio(6434, 15181), 0.42, 0.005);
  EXPECT_NEAR(ratio(1867, 2816), 0.66, 0.005);
  EXPECT_NEAR(ratio(336, 429), 0.78, 0.005);
}

TEST(ClassPartitionTest, CoversEveryTagOnce) {
  int counts[kNumWordClasses] = {};
  for (Upos t : AllUpos()) ++counts[static_cast<int>(ClassOf(t))];
  EXPECT_EQ(counts[0], 6);
  EXPECT_EQ(counts[1], 8);
  EXPECT_EQ(counts[2], 3);
}

TEST(PerTagF1Test, HandCase) {
  // Three gold X; X predicted twice, once correctly.
  Treebank gold = FlatTreebank({{"X", "X", "X", "NOUN"}});
  std::vector<std::vector<Upos>> pred = {{Upos::kX, Upos::kNoun, Upos::kNoun, Upos::kX}};
  TagScores scores = PerTagF1(pred, gold);
  TagScore x = *scores.Get(Upos::kX);
  EXPECT_DOUBLE_EQ(x.precision, 0.5);
  EXPECT_DOUBLE_EQ(x.recall, 1.0 / 3.0);
  EXPECT_NEAR(x.f1, 0.4, 1e-15);
  EXPECT_FALSE(scores.Get(Upos::kIntj).has_value());
}

TEST(PerTagF1Test, NeverPredictedTagScoresZero) {
  Treebank gold = FlatTreebank({{"INTJ", "NOUN"}});
  TagScores scores = PerTagF1({{Upos::kNoun, Upos::kNoun}}, gold);
  EXPECT_EQ(scores.Get(Upos::kIntj)->f1, 0.0);
  EXPECT_EQ(scores.Get(Upos::kIntj)->predicted, 0u);
}

TEST(PerTagF1Test, MatchesOracleAndMicroF1EqualsAccuracy) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    Treebank gold = testing::RandomTreebank(rng, 4, 10, 6);
    auto pred = testing::RandomPredictions(rng, gold, 0.35);
    TagScores scores = PerTagF1(pred, gold);
    std::vector<double> oracle = testing::PerTagF1Oracle(pred, gold);
    for (int t = 0; t < kNumUpos; ++t) {
      std::optional<TagScore> s = scores.Get(UposFromIndex(t));
      if (oracle[t] < 0) {
        EXPECT_FALSE(s.has_value());
      } else {
        ASSERT_TRUE(s.has_value());
        EXPECT_NEAR(s->f1, oracle[t], 1e-12);
      }
    }
    EXPECT_NEAR(scores.MicroF1(), testing::AccuracyOracle(pred, gold), 1e-12);
  }
}

TEST(PerTagF1Test, MisalignedInputThrows) {
  Treebank gold = FlatTreebank({{"X", "X"}});
  EXPECT_THROW(PerTagF1({{Upos::kX}}, gold), InvalidArgument);
}

TEST(TopConfusionsTest, RanksByCountThenNames) {
  ErrorSet errors({E(0, 1, Upos::kNoun, Upos::kVerb), E(0, 2, Upos::kNoun, Upos::kVerb),
                   E(0, 3, Upos::kNoun, Upos::kVerb), E(0, 4, Upos::kVerb, Upos::kNoun),
                   E(0, 5, Upos::kAdj, Upos::kNoun)});
  std::vector<Confusion> top = TopConfusions(errors);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0], (Confusion{Upos::kNoun, Upos::kVerb, 3}));
  EXPECT_EQ(top[1], (Confusion{Upos::kAdj, Upos::kNoun, 1}));  // ADJ sorts before VERB
  EXPECT_EQ(top[2], (Confusion{Upos::kVerb, Upos::kNoun, 1}));
  EXPECT_EQ(TopConfusions(errors, 1).size(), 1u);
}

TEST(SurprisalTest, SpotValues) {
  EXPECT_EQ(Surprisal(1.0), 0.0);
  EXPECT_EQ(Surprisal(0.25), 2.0);
  EXPECT_TRUE(std::isinf(Surprisal(0.0)));
  EXPECT_THROW(Surprisal(1.5), InvalidArgument);
}

TEST(SurprisalTest, BigramMatchesHandCounts) {
  // "D N V ." twice: every context is seen twice with one outcome.
  Treebank train = FlatTreebank({{"DET", "NOUN", "VERB", "PUNCT"}, {"DET", "NOUN", "VERB", "PUNCT"}});
  SurprisalStats s = BigramSurprisal(train, train, ErrorSet());
  EXPECT_NEAR(s.mean_all, -std::log2(3.0 / 19.0), 1e-12);
  SurprisalStats raw = BigramSurprisal(train, train, ErrorSet(), {false});
  EXPECT_EQ(raw.mean_all, 0.0);
}

TEST(SurprisalTest, SingleContextDistribution) {
  // One head-relation context with tags A:3, B:1.
  Treebank train = FlatTreebank({{"VERB", "NOUN", "NOUN", "NOUN", "ADJ"}});
  Treebank target = FlatTreebank({{"VERB", "NOUN", "ADJ"}});
  ErrorSet errors({E(0, 3, Upos::kAdj, Upos::kNoun)});
  SurprisalStats s = HeadRelSurprisal(train, target, errors, {false});
  // ROOT context: VERB with p = 1; dep context: NOUN .75, ADJ .25.
  EXPECT_NEAR(s.mean_all, (0.0 + -std::log2(0.75) + 2.0) / 3.0, 1e-12);
  EXPECT_NEAR(s.mean_errors, 2.0, 1e-12);
  EXPECT_EQ(s.context_kind, ContextKind::kHeadRelation);
}

TEST(SurprisalTest, MatchesCountOracleOnRandomCorpora) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    Treebank train = testing::RandomTreebank(rng, 8, 7, 5, 3);
    Treebank target = testing::RandomTreebank(rng, 4, 7, 5, 3);
    ErrorSet errors = CollectErrors(testing::RandomPredictions(rng, target, 0.3), target);
    for (bool add_one : {true, false}) {
      SurprisalStats bigram = BigramSurprisal(train, target, errors, {add_one});
      testing::OracleSurprisal ob = testing::BigramSurprisalOracle(train, target, errors, add_one);
      SurprisalStats head = HeadRelSurprisal(train, target, errors, {add_one});
      testing::OracleSurprisal oh = testing::HeadRelSurprisalOracle(train, target, errors, add_one);
      if (add_one) {
        EXPECT_NEAR(bigram.mean_all, ob.mean_all, 1e-9);
        EXPECT_NEAR(bigram.mean_errors, ob.mean_errors, 1e-9);
        EXPECT_NEAR(head.mean_all, oh.mean_all, 1e-9);
        EXPECT_NEAR(head.mean_errors, oh.mean_errors, 1e-9);
        EXPECT_GE(bigram.mean_all, 0.0);
        EXPECT_TRUE(std::isfinite(head.mean_all));
      } else {
        EXPECT_EQ(std::isinf(bigram.mean_all), std::isinf(ob.mean_all));
        if (std::isfinite(ob.mean_all)) EXPECT_NEAR(bigram.mean_all, ob.mean_all, 1e-9);
      }
    }
  }
}

TEST(SurprisalTest, InvariantToSentenceOrder) {
  std::mt19937_64 rng(37);
  Treebank train = testing::RandomTreebank(rng, 10, 6, 4, 2);
  Treebank target = testing::RandomTreebank(rng, 6, 6, 4, 2);
  Treebank shuffled = target;
  std::reverse(shuffled.sentences.begin(), shuffled.sentences.end());
  EXPECT_NEAR(BigramSurprisal(train, target, ErrorSet()).mean_all,
              BigramSurprisal(train, shuffled, ErrorSet()).mean_all, 1e-12);
}

TEST(OovStatsTest, HandCounts) {
  std::vector<std::vector<bool>> flags = {
      {true, false, false, false, false}, {true, false, false, false, false}};
  ErrorSet errors({E(0, 1), E(1, 3)});
  OovStats s = OovErrorStats(flags, errors);
  EXPECT_DOUBLE_EQ(s.all, 0.2);
  EXPECT_DOUBLE_EQ(s.errors, 0.5);
  OovStats none = OovErrorStats({{false, false}}, ErrorSet());
  EXPECT_EQ(none.all, 0.0);
  EXPECT_EQ(none.errors, 0.0);
  EXPECT_THROW(OovErrorStats({{false}}, ErrorSet({E(0, 2)})), InvalidArgument);
}

}  // namespace
}  // namespace tagprobe
