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

#include <random>

#include <gtest/gtest.h>

#include "oracles.h"
#include "tagprobe/decoder.h"
#include "tagprobe/errors.h"

namespace tagprobe {
namespace {

nn::Matrix RandomScores(std::mt19937_64& rng, int n, bool integral) {
  std::normal_distribution<double> normal(0.0, 3.0);
  std::uniform_int_distribution<int> small(-3, 3);
  nn::Matrix s(n, n + 1);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    s.data()[i] = integral ? small(rng) : normal(rng);
  }
  return s;
}

TEST(DecoderTest, EnumerationCountsMatchCayley) {
  // Rooted spanning arborescences on n labelled nodes plus ROOT: (n+1)^(n-1).
  EXPECT_EQ(testing::CountArborescences(1), 1);
  EXPECT_EQ(testing::CountArborescences(2), 3);
  EXPECT_EQ(testing::CountArborescences(3), 16);
  EXPECT_EQ(testing::CountArborescences(4), 125);
}

TEST(DecoderTest, ChuLiuEdmondsMatchesBruteForce) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 1 + trial % 5;
    nn::Matrix scores = RandomScores(rng, n, trial % 2 == 0);
    std::vector<int> heads = MaxSpanningArborescence(scores);
    ASSERT_TRUE(IsSpanningArborescence(heads));
    EXPECT_EQ(TreeScore(scores, heads), testing::BruteForceBestTreeScore(scores));
  }
}

TEST(DecoderTest, AlwaysReturnsATree) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 30;
    nn::Matrix scores = RandomScores(rng, n, trial % 3 == 0);
    std::vector<int> heads = MaxSpanningArborescence(scores);
    ASSERT_EQ(heads.size(), static_cast<std::size_t>(n));
    EXPECT_TRUE(IsSpanningArborescence(heads));
  }
}

TEST(DecoderTest, BreaksCyclesOfGreedyChoice) {
  // Tokens 1 and 2 prefer each other; ROOT is the cheapest way out.
  nn::Matrix scores(2, 3);
  scores << 0, -100, 10,
            1, 10, -100;
  EXPECT_EQ(GreedyHeads(scores), (std::vector<int>{2, 1}));
  EXPECT_FALSE(IsSpanningArborescence(GreedyHeads(scores)));
  std::vector<int> heads = MaxSpanningArborescence(scores);
  EXPECT_TRUE(IsSpanningArborescence(heads));
  EXPECT_EQ(TreeScore(scores, heads), 11.0);
}

TEST(DecoderTest, TiesGoToTheLowerHead) {
  nn::Matrix scores = nn::Matrix::Zero(3, 4);
  EXPECT_EQ(MaxSpanningArborescence(scores), (std::vector<int>{0, 0, 0}));
}

TEST(DecoderTest, ArborescenceCheckRejectsBadShapes) {
  EXPECT_TRUE(IsSpanningArborescence({0, 1, 2}));
  EXPECT_FALSE(IsSpanningArborescence({2, 1}));
  EXPECT_FALSE(IsSpanningArborescence({0, 5}));
  EXPECT_FALSE(IsSpanningArborescence({1}));
}

TEST(DecoderTest, DecodeTreeLabelsEachArc) {
  ScoredParse parse;
  parse.arc_scores = nn::Matrix(2, 3);
  parse.arc_scores << 5, 0, 1,
                      0, 9, 0;
  parse.relation_probabilities.assign(2, nn::Matrix::Zero(3, 2));
  parse.relation_probabilities[0](0, 1) = 1.0;  // token 1 from ROOT: label 1
  parse.relation_probabilities[1](1, 0) = 1.0;  // token 2 from token 1: label 0
  std::vector<Arc> arcs = DecodeTree(parse);
  ASSERT_EQ(arcs.size(), 2u);
  EXPECT_EQ(arcs[0].head, 0);
  EXPECT_EQ(arcs[0].relation, 1);
  EXPECT_EQ(arcs[1].head, 1);
  EXPECT_EQ(arcs[1].relation, 0);
}

TEST(DecoderTest, ParsesDecoderNames) {
  EXPECT_EQ(ParseDecoderKind("cle"), DecoderKind::kChuLiuEdmonds);
  EXPECT_EQ(ParseDecoderKind("mst"), DecoderKind::kChuLiuEdmonds);
  EXPECT_EQ(ParseDecoderKind("greedy"), DecoderKind::kGreedy);
  EXPECT_THROW(ParseDecoderKind("eisner"), InvalidArgument);
}

}  // namespace
}  // namespace tagprobe
